import random
from fractions import Fraction

import pytest

from flows.acceptance import octonion_line, odd_line, two_chart_cover
from relproj import linalg
from relproj.amod import (
    find_isomorphism,
    free_rank,
    has_retraction,
    identity_module_map,
    ideal_module,
    module_direct_sum,
    module_map,
    regular_module,
)
from relproj.calg import endo, generated_ideal, identity_algebra_map, localize, quotient_algebra
from relproj.errors import InputError
from relproj.linedesc import (
    Covering,
    base_change_line_check,
    check_cocycle,
    descent_datum,
    direct_sum_symtrivial_check,
    dual_map,
    dual_module,
    epi_from_unit_is_iso,
    find_inverse,
    glue,
    is_line_object,
    is_symtrivial,
    membership_U_I,
    product_line,
    restrict_to_covering,
    signature,
    verify_covering,
)

ONE, ZERO = Fraction(1), Fraction(0)


def _leg(A, element):
    return localize(A, endo(A, element)).map


@pytest.fixture(scope="module")
def cover(Q3):
    return two_chart_cover(Q3)


@pytest.mark.parametrize("algebra", ["O", "Q2", "D", "exterior"])
def test_regular_module_is_a_line(algebra, request):
    A = request.getfixturevalue(algebra)
    line, report = is_line_object(A, regular_module(A))
    assert line
    assert report.details["invertible"] is True
    assert is_symtrivial(A, regular_module(A))


def test_octonion_lines_are_symtrivial(O):
    L = octonion_line(random.Random(11), O)
    line, _ = is_line_object(O, L)
    assert line
    assert find_isomorphism(L, regular_module(O)) is not None


def test_odd_line_is_invertible_but_not_symtrivial():
    A, L = odd_line()
    line, report = is_line_object(A, L)
    assert not line
    assert report.details["invertible"] is True
    assert report.details["signature"] == [-1]
    assert signature(A, L) == (-ONE,)
    assert find_inverse(A, L) is not None


def test_rank_two_is_not_invertible(O, Q):
    assert find_inverse(O, free_rank(O, 2).module) is None
    line, report = is_line_object(Q, module_direct_sum([], Q).module)
    assert not line
    assert report.details == {"invertible": False}


def test_certificate_triangles(D):
    cert = find_inverse(D, regular_module(D))
    assert cert.triangles.passed
    assert cert.inverse.carrier.dims == D.carrier.dims
    assert cert.signature == D.unit


def test_dual_of_identity(Q3):
    M, _ = ideal_module(generated_ideal(Q3, [(ONE, ONE, ZERO)]))
    dual = dual_map(identity_module_map(M))
    assert dual.source.carrier.dims == dual_module(Q3, M).carrier.dims
    assert dual.map.equals(identity_module_map(dual.source).map)


def test_epi_from_unit(Q2):
    reg = regular_module(Q2)
    p = module_map(reg, reg, linalg.diagonal([Fraction(3), Fraction(-1)]))
    inverse, report = epi_from_unit_is_iso(Q2, p)
    assert report.passed
    assert linalg.equal(inverse.map.matrix, linalg.diagonal([Fraction(1, 3), Fraction(-1)]))


def test_epi_from_unit_must_start_at_the_unit(Q2):
    M, inclusion = ideal_module(generated_ideal(Q2, [(ONE, ZERO)]))
    with pytest.raises(InputError):
        epi_from_unit_is_iso(Q2, identity_module_map(M))


def test_epi_from_unit_onto_a_proper_summand(Q2):
    M, _ = ideal_module(generated_ideal(Q2, [(ONE, ZERO)]))
    p = module_map(regular_module(Q2), M, linalg.matrix([[1, 0]]))
    inverse, report = epi_from_unit_is_iso(Q2, p)
    assert inverse is None
    assert report.violations == [{"reason": "epimorphism from the unit is not invertible"}]


def test_products_of_lines(Q2, D):
    product = product_line([regular_module(Q2), regular_module(D)])
    assert product.line
    assert product.product.algebra.dimension == 4
    assert product.module.carrier.total == 4


def test_products_need_one_category(O, Q):
    with pytest.raises(InputError):
        product_line([regular_module(O), regular_module(Q)])


def test_two_chart_cover(cover):
    report = verify_covering(cover)
    assert report.passed
    assert report.details["flat"] == "certified"
    assert report.details["jointly_conservative"] is True
    assert report.details["partition_of_unity"] is not None


def test_single_chart_misses_a_point(Q2):
    report = verify_covering(Covering(Q2, (_leg(Q2, (ONE, ZERO)),)))
    assert not report.passed
    assert report.details["jointly_conservative"] is False
    assert report.details["partition_of_unity"] is None


def test_legs_start_at_the_base(Q2, Q3):
    with pytest.raises(InputError):
        Covering(Q3, (_leg(Q2, (ONE, ZERO)),))


def test_membership(Q2):
    u = _leg(Q2, (ONE, ZERO))
    assert membership_U_I(u, generated_ideal(Q2, [(ONE, ZERO)]))
    assert not membership_U_I(u, generated_ideal(Q2, [(ZERO, ONE)]))


@pytest.mark.parametrize("lam", [1, 2, Fraction(-1, 3)])
def test_gluing_regular_charts(cover, Q3, lam):
    datum = descent_datum(cover, [regular_module(u.target) for u in cover.legs], {(0, 1): lam})
    glued = glue(datum)
    assert glued.report.passed
    assert glued.module.carrier.total == 3
    assert is_line_object(Q3, glued.module)[0]
    assert has_retraction(glued.inclusion)


def test_restriction_round_trip(cover, Q3):
    M = regular_module(Q3)
    glued = glue(restrict_to_covering(cover, M))
    assert glued.report.passed
    assert find_isomorphism(glued.module, M) is not None


def test_cocycle_violation(Q3):
    leg = (ONE, ONE, ZERO)
    cov = Covering(Q3, tuple(_leg(Q3, leg) for _ in range(3)))
    datum = descent_datum(cov, [regular_module(u.target) for u in cov.legs], {(0, 1): 2, (1, 2): 3, (0, 2): 5})
    assert not check_cocycle(datum).passed
    with pytest.raises(InputError):
        glue(datum)


def test_consistent_triple(Q3):
    cov = Covering(Q3, tuple(_leg(Q3, (ONE, ONE, ZERO)) for _ in range(3)))
    datum = descent_datum(cov, [regular_module(u.target) for u in cov.legs], {(0, 1): 2, (1, 2): 3, (0, 2): 6})
    report = check_cocycle(datum)
    assert report.passed
    assert report.checked == 1


def test_descent_datum_shape(cover):
    locals_ = [regular_module(u.target) for u in cover.legs]
    with pytest.raises(InputError):
        descent_datum(cover, locals_, {})
    with pytest.raises(InputError):
        descent_datum(cover, locals_[:1], {(0, 1): 1})


def test_symtrivial_beyond_lines(Q, Q2):
    first, _ = ideal_module(generated_ideal(Q2, [(ONE, ZERO)]))
    assert is_symtrivial(Q2, first)
    assert not is_symtrivial(Q, free_rank(Q, 2).module)
    _, L = odd_line()
    assert not is_symtrivial(L.algebra, L)


def test_direct_sums_of_orthogonal_summands(Q, Q2):
    first, _ = ideal_module(generated_ideal(Q2, [(ONE, ZERO)]))
    second, _ = ideal_module(generated_ideal(Q2, [(ZERO, ONE)]))
    report = direct_sum_symtrivial_check(Q2, first, second)
    assert report.passed
    assert report.details == {"symtrivial": True, "orthogonal": True}
    report = direct_sum_symtrivial_check(Q, regular_module(Q), regular_module(Q))
    assert report.passed
    assert report.details == {"symtrivial": False, "orthogonal": False}


def test_base_change_keeps_lines(Q2, D):
    complement = (ZERO, ONE)
    u = quotient_algebra(Q2, generated_ideal(Q2, [complement]), kind="projection")[1]
    report = base_change_line_check(u, regular_module(Q2))
    assert report.passed
    assert report.details["base_changed_line"] is True
    assert report.details["faithfully_flat"] is False
    report = base_change_line_check(identity_algebra_map(D), regular_module(D))
    assert report.passed
    assert report.details["faithfully_flat"] is True


def test_base_change_of_the_odd_line():
    A, L = odd_line()
    report = base_change_line_check(identity_algebra_map(A), L)
    assert report.passed
    assert report.details["line"] is False
