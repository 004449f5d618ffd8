from fractions import Fraction

import pytest

from relproj.cochain_core import (
    Cochain2,
    GradingGroup,
    braiding,
    check_hexagon,
    check_normalized,
    check_pentagon,
    coboundary3,
    cochain_from_entries,
    eval_f,
    octonion_cochain,
    super_cochain,
    symmetry_ratio,
    trivial_cochain,
    z2_cubed,
)
from relproj.errors import InputError

E1, E2, E4 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


@pytest.mark.parametrize(
    "x, y, expected",
    [
        ((0, 0, 0), (1, 1, 1), 0),
        ((1, 0, 0), (1, 0, 0), 1),
        ((0, 1, 0), (1, 1, 0), 1),
        ((1, 0, 0), (0, 1, 0), 0),
        ((0, 1, 0), (1, 0, 0), 1),
    ],
)
def test_eval_f(x, y, expected):
    assert eval_f(x, y) == expected


@pytest.mark.parametrize("x, y", [((1, 0), (1, 0, 0)), ((1, 0, 0), (0, 2, 0))])
def test_eval_f_rejects_non_bit_vectors(x, y):
    with pytest.raises(InputError):
        eval_f(x, y)


def test_octonion_cochain_values():
    F = octonion_cochain()
    assert all(F((0, 0, 0), g) == 1 for g in F.group.elements)
    assert F(E1, E1) == -1
    assert F(E2, (1, 1, 0)) == -1
    assert check_normalized(F).passed


def test_every_nonzero_octonion_square_is_minus_one():
    F = octonion_cochain()
    assert all(F(g, g) == -1 for g in F.group.elements if any(g))


def test_coboundary_values():
    phi = coboundary3(octonion_cochain())
    group = phi.group
    assert all(phi(group.identity, y, z) == 1 for y in group.elements for z in group.elements)
    assert phi(E1, E2, E4) == -1


def test_symmetry_ratio():
    R = symmetry_ratio(octonion_cochain())
    assert all(R(x, x) == 1 for x in R.group.elements)
    assert R(E1, E2) == -1


def test_super_braiding_carries_the_parity_sign():
    F = super_cochain()
    assert symmetry_ratio(F)((1,), (1,)) == 1
    assert braiding(F)((1,), (1,)) == -1
    assert braiding(F)((0,), (1,)) == 1


def test_pentagon_exhaustive_for_octonions():
    report = check_pentagon(coboundary3(octonion_cochain()))
    assert report.passed
    assert report.checked == 4096


def test_pentagon_trivial():
    assert check_pentagon(coboundary3(trivial_cochain(z2_cubed()))).passed


def test_pentagon_catches_a_flipped_entry():
    phi = coboundary3(octonion_cochain())
    report = check_pentagon(phi.perturbed(E1, E2, E4, -phi(E1, E2, E4)))
    assert not report.passed
    assert report.violations


@pytest.mark.parametrize(
    "F, triples",
    [
        (octonion_cochain(), 512),
        (trivial_cochain(z2_cubed()), 512),
        (trivial_cochain(GradingGroup((3, 2))), 216),
        (super_cochain(), 8),
        (cochain_from_entries(GradingGroup((2,)), [((1,), (1,), -1)]), 8),
    ],
)
def test_hexagon(F, triples):
    report = check_hexagon(F)
    assert report.passed
    assert report.checked == triples


def test_unnormalized_cochain_is_reported():
    F = cochain_from_entries(GradingGroup((2,)), [((0,), (1,), 2)])
    report = check_normalized(F)
    assert not report.passed
    assert report.violations[0]["value"] == 2


def test_zero_entry_is_an_input_error():
    with pytest.raises(InputError) as err:
        cochain_from_entries(GradingGroup((2,)), [((1,), (1,), 0)])
    assert err.value.location == "F([1], [1])"


def test_parity_must_be_a_homomorphism():
    group = GradingGroup((2,))
    table = ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(1)))
    with pytest.raises(InputError):
        Cochain2(group, table, parity=(1, 1))


@pytest.mark.parametrize("orders", [(0,), (2, -1)])
def test_group_orders_must_be_positive(orders):
    with pytest.raises(InputError):
        GradingGroup(orders)


def test_group_elements_are_lexicographic():
    group = GradingGroup((2, 3))
    assert group.elements[:4] == ((0, 0), (0, 1), (0, 2), (1, 0))
    assert group.add((1, 2), (1, 2)) == (0, 1)
    assert group.neg((0, 1)) == (0, 2)
    with pytest.raises(InputError):
        group.index((0, 3))
