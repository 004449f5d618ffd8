from fractions import Fraction

import pytest

from relproj import linalg
from relproj.cochain_core import GradingGroup, braiding, coboundary3, octonion_cochain, trivial_cochain, z2_cubed
from relproj.errors import InputError
from relproj.graded_linear import (
    GradedMap,
    GradedSpace,
    associator_map,
    check_hexagon_maps,
    cokernel,
    coherence_spot_check,
    concentrated,
    direct_sum,
    identity_map,
    image,
    is_invertible,
    kernel,
    kernel_subspace,
    symmetry_map,
    tensor,
    unit_object,
    unitor_maps,
    zero_map,
    zero_object,
)

G = z2_cubed()
E1, E2, E4 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
TRIVIAL = GradingGroup(())


def _line(degree):
    return concentrated(G, degree, 1)


def test_tensor_of_octonion_carriers(O):
    assert tensor(O.carrier, O.carrier).space.dims == (8,) * 8


def test_tensor_of_concentrated_spaces():
    assert tensor(_line(E1), _line(E2)).space.dims == _line((1, 1, 0)).dims


def test_tensor_with_unit_keeps_the_shape():
    X = GradedSpace(G, (1, 2, 0, 0, 3, 0, 0, 1))
    assert tensor(unit_object(G), X).space.dims == X.dims
    lam, rho = unitor_maps(X)
    assert is_invertible(lam) and is_invertible(rho)


def test_tensor_over_different_groups_fails():
    with pytest.raises(InputError):
        tensor(unit_object(G), unit_object(TRIVIAL))


def test_associator_is_a_permutation_for_the_trivial_cochain():
    phi = coboundary3(trivial_cochain(G))
    X = GradedSpace(G, (1, 1, 0, 0, 1, 0, 0, 0))
    values = {v for row in linalg.entries(associator_map(X, X, X, phi).matrix) for v in row}
    assert values <= {Fraction(0), Fraction(1)}


def test_associator_sign_on_the_witness_triple():
    phi = coboundary3(octonion_cochain())
    m = associator_map(_line(E1), _line(E2), _line(E4), phi).matrix
    assert linalg.entries(m) == [[Fraction(-1)]]


def test_symmetry_sign():
    R = braiding(octonion_cochain())
    assert linalg.entries(symmetry_map(_line(E1), _line(E2), R).matrix) == [[Fraction(-1)]]
    assert linalg.entries(symmetry_map(unit_object(G), _line(E1), R).matrix) == [[Fraction(1)]]


def test_coherence_as_maps():
    F = octonion_cochain()
    report = coherence_spot_check(coboundary3(F), braiding(F))
    assert report.passed
    assert report.checked == 512
    assert check_hexagon_maps(_line(E1), _line(E2), _line(E4), coboundary3(F), braiding(F))


def test_kernel_image_cokernel_of_identity_and_zero():
    X = GradedSpace(G, (2, 0, 1, 0, 0, 0, 0, 1))
    K, _ = kernel(identity_map(X))
    C, _ = cokernel(identity_map(X))
    I, _, _ = image(identity_map(X))
    assert K.total == 0 and C.total == 0 and I.dims == X.dims
    K, _ = kernel(zero_map(X, X))
    C, _ = cokernel(zero_map(X, X))
    I, _, _ = image(zero_map(X, X))
    assert K.dims == X.dims and C.dims == X.dims and I.total == 0


def test_kernel_by_row_reduction():
    X = GradedSpace(TRIVIAL, (2,))
    f = GradedMap.from_matrix(X, X, linalg.matrix([[1, 1], [0, 0]]))
    sub = kernel_subspace(f)
    assert sub.dims == (1,)
    assert sub.contains_vector((Fraction(1), Fraction(-1)))
    space, mono, epi = image(f)
    assert space.dims == (1,)
    assert linalg.equal(linalg.mul(mono.matrix, epi.matrix), f.matrix)


def test_maps_must_preserve_degree():
    X = GradedSpace(G, (1, 1, 0, 0, 0, 0, 0, 0))
    with pytest.raises(InputError):
        GradedMap.from_matrix(X, X, linalg.matrix([[0, 1], [0, 0]]))


def test_direct_sums(O):
    assert direct_sum([O.carrier, O.carrier]).space.dims == (2,) * 8
    X = GradedSpace(G, (1, 0, 0, 3, 0, 0, 0, 0))
    assert direct_sum([X, zero_object(G)]).space.dims == X.dims
    assert direct_sum([unit_object(G), unit_object(G)]).space.dims[0] == 2
    assert direct_sum([], G).space.total == 0
