import random
from fractions import Fraction

import pytest

from relproj.calg import (
    check_algebra_axioms,
    check_algebra_map,
    element_endos,
    element_inverse,
    endo,
    enveloping_action_algebra,
    factor_through_localization,
    fitting_exponent,
    generated_ideal,
    inverse_in_localization,
    is_field_object,
    localize,
    maximal_ideal_above,
    maximal_ideals,
    partition_of_unity,
    product_of_fields,
    quotient_algebra,
    twisted_group_algebra,
    underlying_identities,
    whole_ideal,
    with_product,
    zero_ideal,
    algebra_from_structure,
)
from relproj import linalg
from relproj.cochain_core import trivial_cochain, z2_cubed
from relproj.errors import InputError
from relproj.graded_linear import GradedSpace

ONE, ZERO = Fraction(1), Fraction(0)


def _projection(A, k):
    complement = tuple(u - v for u, v in zip(A.unit, A.basis(k)))
    return quotient_algebra(A, generated_ideal(A, [complement]), kind="projection")[1]


def test_octonion_axioms(O):
    report = check_algebra_axioms(O)
    assert report.passed
    assert report.details == {"unit": 8, "associativity": 512, "commutativity": 64}


def test_flipped_structure_constant_is_caught(O):
    flipped = with_product(O, 1, 1, tuple(-v for v in O.product(1, 1)))
    report = check_algebra_axioms(flipped)
    assert not report.passed
    assert report.violations[0]["law"] in ("associativity", "commutativity")


def test_trivial_group_algebra_is_associative():
    G = z2_cubed()
    A = twisted_group_algebra(G, trivial_cochain(G))
    assert check_algebra_axioms(A).passed
    assert underlying_identities(A, 5, 0).details["witness"] == "associative"


def test_octonion_identities(O):
    report = underlying_identities(O, 25, seed=7)
    assert report.passed
    assert report.checked == 100
    assert report.details["witness"] == "non-associative"


def test_element_endos(O, Q2):
    assert [e.element for e in element_endos(O)] == [O.unit]
    assert len(element_endos(Q2)) == 2
    assert element_endos(product_of_fields(0)) == []


def test_generated_ideals(Q3):
    assert generated_ideal(Q3, [Q3.unit]).is_whole()
    ideal = generated_ideal(Q3, [(ONE, ONE, ZERO)])
    assert ideal.subspace.dims == (2,)
    assert ideal.subspace.contains_vector((ONE, ZERO, ZERO))
    assert ideal.subspace.contains_vector((ZERO, ONE, ZERO))
    assert ideal.is_closed()
    assert generated_ideal(Q3, []).is_zero()


def _sparse_vector(rng, n):
    return tuple(Fraction(rng.choice([0, 0, 0, 1, -2])) for _ in range(n))


@pytest.mark.parametrize("algebra", ["Q3", "O", "D", "exterior"])
def test_generated_ideal_is_monotone_and_idempotent(request, algebra):
    A = request.getfixturevalue(algebra)
    rng = random.Random(5)
    for _ in range(10):
        S = [_sparse_vector(rng, A.dimension) for _ in range(rng.randint(0, 2))]
        T = [_sparse_vector(rng, A.dimension) for _ in range(rng.randint(1, 2))]
        I = generated_ideal(A, S)
        assert generated_ideal(A, S + T).subspace.contains(I.subspace)
        assert generated_ideal(A, I.subspace.vectors()) == I


def test_partition_of_unity_identity(Q2):
    certificate = partition_of_unity(Q2, [endo(Q2, Q2.unit)])
    assert [s.element for s in certificate] == [Q2.unit]


def test_partition_of_unity_for_a_generating_family(Q3):
    family = [endo(Q3, (1, 1, 0)), endo(Q3, (0, 1, 1))]
    certificate = partition_of_unity(Q3, family)
    assert certificate is not None
    total = [ZERO] * 3
    for s, f in zip(certificate, family):
        total = [a + b for a, b in zip(total, Q3.multiply(s.element, f.element))]
    assert tuple(total) == Q3.unit


def test_no_partition_of_unity_for_a_proper_ideal(Q2):
    assert partition_of_unity(Q2, [endo(Q2, (1, 0))]) is None


def test_localize_at_identity_and_zero(Q2):
    same = localize(Q2, endo(Q2, Q2.unit))
    assert same.algebra.dimension == 2
    assert same.map.details["exponent"] == 1
    assert localize(Q2, endo(Q2, (0, 0))).algebra.dimension == 0


def test_localize_at_an_idempotent(Q2):
    loc = localize(Q2, endo(Q2, (1, 0)))
    assert loc.algebra.dimension == 1
    assert check_algebra_map(loc.map).passed
    assert inverse_in_localization(loc.map) is not None
    first, second = _projection(Q2, 0), _projection(Q2, 1)
    assert factor_through_localization(loc.map, first) is not None
    assert factor_through_localization(loc.map, second) is None


def test_localize_dual_numbers_at_a_nilpotent(D):
    loc = localize(D, endo(D, (0, 1)))
    assert loc.algebra.dimension == 0
    assert loc.map.details["exponent"] == 2


def test_fitting_exponent():
    assert fitting_exponent(linalg.identity(3)) == 1
    assert fitting_exponent(linalg.matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])) == 3


def test_element_inverse(D):
    assert element_inverse(D, (2, 1)) == (Fraction(1, 2), Fraction(-1, 4))
    assert element_inverse(D, (0, 1)) is None


def test_field_objects(O, Q, Q2):
    assert is_field_object(O)
    assert is_field_object(Q)
    assert not is_field_object(Q2)
    with pytest.raises(InputError):
        is_field_object(product_of_fields(0))


def test_enveloping_action_algebra(O, Q, Q2):
    assert enveloping_action_algebra(Q).dimension == 1
    assert enveloping_action_algebra(Q2).dimension == 2
    assert enveloping_action_algebra(O).dimension == 64


def test_maximal_ideals(Q3, D, O):
    assert len(maximal_ideals(Q3)) == 3
    assert [I.subspace.dims for I in maximal_ideals(D)] == [(1,)]
    assert [I.is_zero() for I in maximal_ideals(O)] == [True]


def test_maximal_ideal_above_uses_the_first_coordinate_kernel(Q3):
    M = maximal_ideal_above(Q3, zero_ideal(Q3))
    assert M.subspace.dims == (2,)
    assert M.subspace.contains_vector((ZERO, ONE, ZERO))
    assert M.subspace.contains_vector((ZERO, ZERO, ONE))


def test_maximal_ideal_above_in_simple_algebras(O, Q):
    assert maximal_ideal_above(O, zero_ideal(O)).is_zero()
    assert maximal_ideal_above(Q, zero_ideal(Q)).is_zero()
    with pytest.raises(InputError):
        maximal_ideal_above(Q, whole_ideal(Q))


def test_multiplication_must_add_degrees():
    G = z2_cubed()
    carrier = GradedSpace(G, (1, 1, 0, 0, 0, 0, 0, 0))
    with pytest.raises(InputError):
        algebra_from_structure(trivial_cochain(G), carrier, {(1, 1): (0, 1)}, (1, 0))
