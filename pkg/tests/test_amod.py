import random
from fractions import Fraction

import pytest

from flows.acceptance import octonion_line
from relproj import linalg
from relproj.amod import (
    adjunction_inverse,
    adjunction_transpose,
    base_change,
    check_module_axioms,
    check_module_map,
    compose_module_maps,
    composite_base_change_iso,
    degree_zero_data,
    find_isomorphism,
    find_retraction,
    free_module,
    free_rank,
    generator_check,
    has_retraction,
    ideal_module,
    identity_module_map,
    inner_hom,
    left_unitor,
    module_direct_sum,
    module_map,
    o_module_from_degree_zero,
    regular_module,
    tensor_over,
    v0_conservative_check,
    with_action_entry,
    zeta_map,
)
from relproj.calg import compose_algebra_maps, endo, generated_ideal, identity_algebra_map, localize, quotient_algebra
from relproj.errors import InputError
from relproj.graded_linear import GradedMap, compose, direct_sum, is_invertible, unit_object
from relproj.proj import unit_mono

ONE, ZERO = Fraction(1), Fraction(0)


def _projection(A, k):
    complement = tuple(u - v for u, v in zip(A.unit, A.basis(k)))
    return quotient_algebra(A, generated_ideal(A, [complement]), kind="projection")[1]


def _coordinate_ideal(A, k):
    return ideal_module(generated_ideal(A, [A.basis(k)]))


def test_regular_octonion_module(O):
    M = regular_module(O)
    assert check_module_axioms(M).passed
    x = O.basis(0)
    for g in range(1, 8):
        e_g = O.basis(g)
        assert M.act(e_g, M.act(e_g, x)) == tuple(-v for v in x)


def test_flipped_action_is_caught(O):
    broken = with_action_entry(regular_module(O), 1, 1, 0, -1)
    report = check_module_axioms(broken)
    assert not report.passed


def test_free_modules(O, Q2):
    assert check_module_axioms(free_module(Q2, unit_object(Q2.group))).passed
    assert free_module(Q2, unit_object(Q2.group)).carrier.dims == Q2.carrier.dims
    two = direct_sum([unit_object(O.group), unit_object(O.group)]).space
    assert free_module(O, two).carrier.dims == (2,) * 8
    assert free_module(O, direct_sum([], O.group).space).carrier.total == 0


def test_adjunction_round_trip(Q2):
    X = unit_object(Q2.group)
    M = regular_module(Q2)
    g = GradedMap.from_matrix(X, M.carrier, linalg.matrix([[1], [2]]))
    f = adjunction_transpose(Q2, X, M, g)
    assert check_module_map(f).passed
    assert adjunction_inverse(Q2, X, f).equals(g)


def test_module_from_degree_zero_data(O):
    isos = {g: [[1]] for g in O.group.elements if any(g)}
    M = o_module_from_degree_zero(1, isos, O)
    assert check_module_axioms(M).passed
    assert find_isomorphism(M, regular_module(O)) is not None
    assert o_module_from_degree_zero(0, {}, O).carrier.total == 0


def test_rank_two_module_from_degree_zero_data(O):
    isos = {g: [[1, 0], [0, 1]] for g in O.group.elements if any(g)}
    M = o_module_from_degree_zero(2, isos, O)
    assert find_isomorphism(M, free_rank(O, 2).module) is not None


def test_octonion_modules_are_rebuilt_from_their_degree_zero_part(O):
    M = octonion_line(random.Random(3), O)
    d, isos = degree_zero_data(M)
    assert d == 1
    assert find_isomorphism(o_module_from_degree_zero(d, isos, O), M) is not None


def test_singular_degree_zero_data_is_rejected(O):
    isos = {g: [[0]] for g in O.group.elements if any(g)}
    with pytest.raises(InputError):
        o_module_from_degree_zero(1, isos, O)


def test_tensor_over(O, Q2, Q3):
    assert tensor_over(O, regular_module(O), regular_module(O)).module.carrier.dims == O.carrier.dims
    first, _ = _coordinate_ideal(Q2, 0)
    second, _ = _coordinate_ideal(Q2, 1)
    assert tensor_over(Q2, first, second).module.carrier.total == 0
    M, _ = _coordinate_ideal(Q3, 2)
    assert is_invertible(left_unitor(M).map)


def test_base_change(Q2):
    first, _ = _coordinate_ideal(Q2, 0)
    second, _ = _coordinate_ideal(Q2, 1)
    assert base_change(identity_algebra_map(Q2), first).module.carrier.dims == first.carrier.dims
    u = _projection(Q2, 0)
    assert base_change(u, first).module.carrier.total == 1
    assert base_change(u, second).module.carrier.total == 0


def test_composite_base_change_along_localization_then_projection(Q3):
    v = localize(Q3, endo(Q3, (1, 1, 0))).map
    B = v.target
    w = quotient_algebra(B, generated_ideal(B, [v.apply(Q3.basis(1))]), kind="projection")[1]
    assert w.target.dimension == 1
    wv = compose_algebra_maps(w, v)
    rng = random.Random(2)
    for _ in range(4):
        pieces = [regular_module(Q3)] + [_coordinate_ideal(Q3, rng.randrange(3))[0] for _ in range(rng.randint(0, 2))]
        M = module_direct_sum(rng.sample(pieces, len(pieces))).module
        iso = composite_base_change_iso(v, w, M)
        assert check_module_map(iso).passed
        assert is_invertible(iso.map)
        inner = base_change(v, M)
        outer = base_change(w, inner.module)
        assert compose(iso.map, compose(outer.unit, inner.unit)).equals(base_change(wv, M).unit)


def test_inner_hom(O, Q3):
    M, _ = _coordinate_ideal(Q3, 1)
    assert inner_hom(Q3, regular_module(Q3), M).module.carrier.dims == M.carrier.dims
    H = inner_hom(O, regular_module(O), regular_module(O))
    assert H.module.carrier.dims == O.carrier.dims
    assert len(H.global_sections()) == 1
    zero = module_direct_sum([], Q3).module
    assert inner_hom(Q3, zero, M).module.carrier.total == 0


def test_zeta(O, Q2):
    _, invertible = zeta_map(identity_algebra_map(O), regular_module(O), regular_module(O))
    assert invertible
    first, _ = _coordinate_ideal(Q2, 0)
    _, invertible = zeta_map(_projection(Q2, 0), first, first)
    assert invertible


def test_retractions(Q, D):
    x = unit_mono(Q, [[2], [0]])
    r = find_retraction(x)
    assert r is not None
    assert compose_module_maps(r, x).map.equals(identity_module_map(x.source).map)
    assert has_retraction(x)
    _, inclusion = ideal_module(generated_ideal(D, [(0, 1)]))
    assert find_retraction(inclusion) is None
    assert not has_retraction(inclusion)


def test_summand_injection_retracts_onto_itself(Q3):
    summands = module_direct_sum([regular_module(Q3), regular_module(Q3)])
    r = find_retraction(summands.injections[0])
    assert compose_module_maps(r, summands.injections[0]).map.equals(identity_module_map(regular_module(Q3)).map)


def test_retraction_needs_a_mono(Q):
    with pytest.raises(InputError):
        find_retraction(unit_mono(Q, [[0], [0]]))


def test_v0_conservative(O):
    M = regular_module(O)
    doubled = module_map(M, M, linalg.scale(linalg.identity(8), 2))
    report = v0_conservative_check(doubled)
    assert report.passed
    assert report.details == {"v0_invertible": True, "invertible": True}
    zero = module_map(M, M, linalg.zeros(8, 8))
    report = v0_conservative_check(zero)
    assert report.passed
    assert report.details["v0_invertible"] is False


def test_generator(O):
    assert generator_check(O).passed


def test_non_equivariant_matrix_is_rejected(Q2):
    M = regular_module(Q2)
    with pytest.raises(InputError):
        module_map(M, M, linalg.matrix([[0, 1], [1, 0]]))
