"""A-valued points of relative projective space.

A point of P^n over A is a line object L with a split mono L -> A^(n+1);
the quotient form is a split epi A^(n+1) -> L. Chart i holds the points
whose i-th component is invertible.
"""
import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from sympy.polys.matrices import DomainMatrix

from helpers.logging import logger
from relproj import linalg
from relproj.amod import (
    ModuleInC,
    ModuleMap,
    ModuleSum,
    base_change,
    base_change_map,
    check_module_map,
    compose_module_maps,
    find_retraction,
    find_section,
    free_rank,
    inner_hom,
    inverse_module_map,
    module_direct_sum,
    module_map,
    regular_module,
    restrict_scalars,
)
from relproj.calg import AlgebraInC, AlgebraMap, element_inverse, is_field_object, random_element
from relproj.errors import InputError
from relproj.graded_linear import GradedMap, is_epi, is_invertible, is_mono
from relproj.linalg import ZERO, Vector
from relproj.linedesc import (
    Covering,
    LineCertificate,
    descent_datum,
    dual_map,
    epi_from_unit_is_iso,
    find_inverse,
    glue,
    product_line,
)
from relproj.report import CheckReport


@dataclass(frozen=True, eq=False)
class ProjPoint:
    algebra: AlgebraInC
    n: int
    line: ModuleInC
    mono: ModuleMap
    retraction: ModuleMap
    line_cert: LineCertificate


@dataclass(frozen=True, eq=False)
class QuotPoint:
    algebra: AlgebraInC
    n: int
    line: ModuleInC
    epi: ModuleMap
    section: ModuleMap
    line_cert: LineCertificate


class ChartCoords(NamedTuple):
    index: int
    coords: tuple[Vector, ...]


def free_target(A: AlgebraInC, n: int) -> ModuleSum:
    """A^(n+1) with its coordinate injections and projections."""
    if n < 0:
        raise InputError("n must be non-negative")
    return free_rank(A, n + 1)


def _check_index(n: int, i: int) -> None:
    if not 0 <= i <= n:
        raise InputError(f"chart index {i} outside 0..{n}")


def _degree_zero(A: AlgebraInC, values: Sequence[Sequence], where: str) -> list[Vector]:
    result = []
    for k, v in enumerate(values):
        vector = tuple(Fraction(c) for c in v)
        if len(vector) != A.dimension or not A.is_degree_zero(vector):
            raise InputError("coordinates must be identity-degree elements", location=f"{where}[{k}]")
        result.append(vector)
    return result


def _right_multiplication(A: AlgebraInC, c: Vector) -> DomainMatrix:
    return linalg.from_columns([A.multiply(A.basis(a), c) for a in range(A.dimension)], A.dimension)


def unit_mono(A: AlgebraInC, values: Sequence[Sequence]) -> ModuleMap:
    """A -> A^(n+1), a -> (a c_0, ..., a c_n)."""
    values = _degree_zero(A, values, "values")
    if not values:
        raise InputError("at least one coordinate is required")
    free = free_target(A, len(values) - 1)
    m = linalg.zeros(free.module.carrier.total, A.dimension)
    for inj, c in zip(free.injections, values):
        m = linalg.add(m, linalg.mul(inj.map.matrix, _right_multiplication(A, c)))
    return module_map(regular_module(A), free.module, m)


def unit_epi(A: AlgebraInC, values: Sequence[Sequence]) -> ModuleMap:
    """A^(n+1) -> A, (a_j) -> sum a_j c_j."""
    values = _degree_zero(A, values, "values")
    if not values:
        raise InputError("at least one coordinate is required")
    free = free_target(A, len(values) - 1)
    m = linalg.zeros(A.dimension, free.module.carrier.total)
    for proj, c in zip(free.projections, values):
        m = linalg.add(m, linalg.mul(_right_multiplication(A, c), proj.map.matrix))
    return module_map(free.module, regular_module(A), m)


def _line_report(A: AlgebraInC, L: ModuleInC, report: CheckReport) -> tuple[LineCertificate | None, CheckReport]:
    cert = find_inverse(A, L)
    report.checked += 1
    if cert is None:
        report.fail({"condition": "line object", "reason": "not invertible"})
        return None, report
    report = report.merge(cert.triangles)
    report.checked += 1
    if cert.signature != A.unit:
        report.fail({"condition": "line object", "reason": "nontrivial signature"})
    return cert, report


def _checked_map(f: ModuleMap, source: ModuleInC, target: ModuleInC, what: str) -> None:
    if f.source is not source or f.target is not target:
        raise InputError(f"the {what} has the wrong source or target")
    equivariance = check_module_map(f)
    if not equivariance.passed:
        raise InputError(f"the {what} is not A-linear", location=str(equivariance.violations[0]))


def verify_point(A: AlgebraInC, n: int, L: ModuleInC, x: ModuleMap) -> tuple[ProjPoint | None, CheckReport]:
    """Mono, line object and retraction; the report names whichever fails."""
    free = free_target(A, n)
    _checked_map(x, L, free.module, "mono")
    report = CheckReport("point")
    report.checked += 1
    if not is_mono(x.map):
        report.fail({"condition": "mono"})
        return None, report
    cert, report = _line_report(A, L, report)
    if cert is None:
        return None, report
    retraction = find_retraction(x)
    report.checked += 1
    if retraction is None:
        report.fail({"condition": "direct summand"})
    if not report.passed:
        return None, report
    return ProjPoint(A, n, L, x, retraction, cert), report


def verify_quotient(A: AlgebraInC, n: int, L: ModuleInC, y: ModuleMap) -> tuple[QuotPoint | None, CheckReport]:
    free = free_target(A, n)
    _checked_map(y, free.module, L, "epi")
    report = CheckReport("quotient_point")
    report.checked += 1
    if not is_epi(y.map):
        report.fail({"condition": "epi"})
        return None, report
    cert, report = _line_report(A, L, report)
    if cert is None:
        return None, report
    section = find_section(y)
    report.checked += 1
    if section is None:
        report.fail({"condition": "split"})
    if not report.passed:
        return None, report
    return QuotPoint(A, n, L, y, section, cert), report


def _component(p: ProjPoint, j: int) -> ModuleMap:
    return compose_module_maps(free_target(p.algebra, p.n).projections[j], p.mono)


def chart_membership(p: ProjPoint, i: int) -> bool:
    _check_index(p.n, i)
    return is_invertible(_component(p, i).map)


def chart_coordinates(p: ProjPoint, i: int) -> ChartCoords:
    """(pi_j x (pi_i x)^-1)(1) for j != i."""
    _check_index(p.n, i)
    A = p.algebra
    inverse = inverse_module_map(_component(p, i))
    if inverse is None:
        raise InputError(f"point is not in chart {i}")
    normalized = compose_module_maps(p.mono, inverse).apply(A.unit)
    free = free_target(A, p.n)
    return ChartCoords(i, tuple(free.projections[j].apply(normalized) for j in range(p.n + 1) if j != i))


def point_from_chart(A: AlgebraInC, n: int, i: int, coords: Sequence[Sequence]) -> ProjPoint:
    _check_index(n, i)
    if len(coords) != n:
        raise InputError(f"chart coordinates of P^{n} need {n} entries")
    values = _degree_zero(A, coords, "coords")
    values.insert(i, A.unit)
    L = regular_module(A)
    cert = find_inverse(A, L)
    if cert is None:
        raise ArithmeticError("the unit module has no inverse")
    return ProjPoint(A, n, L, unit_mono(A, values), free_target(A, n).projections[i], cert)


def transition(A: AlgebraInC, n: int, i: int, j: int, coords: Sequence[Sequence]) -> tuple[Vector, ...]:
    """Chart i coordinates of a point to its chart j coordinates: x_k/x_j = (x_j/x_i)^-1 x_k/x_i."""
    _check_index(n, i)
    _check_index(n, j)
    if len(coords) != n:
        raise InputError(f"chart coordinates of P^{n} need {n} entries")
    values = _degree_zero(A, coords, "coords")
    if i == j:
        return tuple(values)
    values.insert(i, A.unit)
    pivot = element_inverse(A, values[j])
    if pivot is None:
        raise InputError(f"x_{j}/x_{i} is not invertible", location=f"coords[{j if j < i else j - 1}]")
    return tuple(A.multiply(pivot, v) for k, v in enumerate(values) if k != j)


def quotient_chart_membership(q: QuotPoint, i: int) -> bool:
    """y lambda_i: A -> L is epi; onto a line it is then invertible."""
    _check_index(q.n, i)
    c = compose_module_maps(q.epi, free_target(q.algebra, q.n).injections[i])
    if not is_epi(c.map):
        return False
    inverse, _ = epi_from_unit_is_iso(q.algebra, c)
    return inverse is not None


def quotient_chart_coordinates(q: QuotPoint, i: int) -> ChartCoords:
    _check_index(q.n, i)
    A = q.algebra
    free = free_target(A, q.n)
    c = compose_module_maps(q.epi, free.injections[i])
    if not is_epi(c.map):
        raise InputError(f"quotient is not in chart {i}")
    inverse, report = epi_from_unit_is_iso(A, c)
    if inverse is None:
        raise ArithmeticError(f"epimorphism onto a line is not invertible: {report.violations}")
    normalized = compose_module_maps(inverse, q.epi)
    return ChartCoords(i, tuple(normalized.apply(free.injections[j].apply(A.unit)) for j in range(q.n + 1) if j != i))


@functools.cache
def _free_dual(A: AlgebraInC, n: int) -> ModuleMap:
    """(A^(n+1))^v -> A^(n+1), h -> (h(lambda_j(1)))_j."""
    free = free_target(A, n)
    hom = inner_hom(A, free.module, regular_module(A))
    size = free.module.carrier.total
    units = [linalg.column(inj.apply(A.unit)) for inj in free.injections]
    columns = []
    for h in range(hom.module.carrier.total):
        H = hom.to_matrix(hom.module.carrier.basis_vector(h))
        image = [ZERO] * size
        for inj, unit in zip(free.injections, units):
            for k, v in enumerate(inj.apply(linalg.flat(linalg.mul(H, unit)))):
                image[k] += v
        columns.append(image)
    return module_map(hom.module, free.module, linalg.from_columns(columns, size))


def dualize_point(q: QuotPoint) -> ProjPoint:
    """(A^(n+1) -> L) to (L^v -> A^(n+1)); the retraction is the dual of the section."""
    A = q.algebra
    iso = _free_dual(A, q.n)
    back = inverse_module_map(iso)
    if back is None:
        raise ArithmeticError("free module is not self-dual")
    mono = compose_module_maps(iso, dual_map(q.epi))
    retraction = compose_module_maps(dual_map(q.section), back)
    cert = find_inverse(A, mono.source)
    if cert is None:
        raise ArithmeticError("dual of a line object is not invertible")
    return ProjPoint(A, q.n, mono.source, mono, retraction, cert)


def dualize_point_inv(p: ProjPoint) -> QuotPoint:
    A = p.algebra
    iso = _free_dual(A, p.n)
    back = inverse_module_map(iso)
    if back is None:
        raise ArithmeticError("free module is not self-dual")
    epi = compose_module_maps(dual_map(p.mono), back)
    section = compose_module_maps(iso, dual_map(p.retraction))
    cert = find_inverse(A, epi.target)
    if cert is None:
        raise ArithmeticError("dual of a line object is not invertible")
    return QuotPoint(A, p.n, epi.target, epi, section, cert)


def points_equal(p1: ProjPoint, p2: ProjPoint) -> bool:
    """Same subobject: lambda = r_2 x_1 is invertible and x_2 lambda = x_1."""
    if p1.algebra is not p2.algebra or p1.n != p2.n:
        return False
    connecting = compose_module_maps(p2.retraction, p1.mono)
    if not is_invertible(connecting.map):
        return False
    return compose_module_maps(p2.mono, connecting).map.equals(p1.mono.map)


def quotients_equal(q1: QuotPoint, q2: QuotPoint) -> bool:
    """Same quotient: lambda = y_2 s_1 is invertible and lambda y_1 = y_2."""
    if q1.algebra is not q2.algebra or q1.n != q2.n:
        return False
    connecting = compose_module_maps(q2.epi, q1.section)
    if not is_invertible(connecting.map):
        return False
    return compose_module_maps(connecting, q1.epi).map.equals(q2.epi.map)


def _free_base_change(u: AlgebraMap, n: int) -> ModuleMap:
    """B (x)_A A^(n+1) -> B^(n+1), b (x) lambda_j(a) -> lambda_j(b u(a))."""
    A, B = u.source, u.target
    src, dst = free_target(A, n), free_target(B, n)
    bc = base_change(u, src.module)
    T = bc.tensor.product
    size = dst.module.carrier.total
    columns = []
    for b, k in T.pairs:
        basis = src.module.carrier.basis_vector(k)
        image = [ZERO] * size
        for proj, inj in zip(src.projections, dst.injections):
            a = proj.apply(basis)
            if any(a):
                for r, v in enumerate(inj.apply(B.multiply(B.basis(b), u.apply(a)))):
                    image[r] += v
        columns.append(image)
    g = GradedMap.from_matrix(T.space, dst.module.carrier, linalg.from_columns(columns, size))
    return ModuleMap(bc.module, dst.module, bc.tensor.induced(g))


def base_change_point(u: AlgebraMap, p: ProjPoint) -> ProjPoint:
    if u.source is not p.algebra:
        raise InputError("the algebra map does not start at the point's algebra")
    B = u.target
    iso = _free_base_change(u, p.n)
    back = inverse_module_map(iso)
    if back is None:
        raise ArithmeticError("base change of A^(n+1) is not free")
    mono = compose_module_maps(iso, base_change_map(u, p.mono))
    retraction = compose_module_maps(base_change_map(u, p.retraction), back)
    cert = find_inverse(B, mono.source)
    if cert is None:
        raise ArithmeticError("base change of a line object is not invertible")
    return ProjPoint(B, p.n, mono.source, mono, retraction, cert)


def _restriction_to_legs(cov: Covering, n: int) -> tuple[ModuleSum, DomainMatrix]:
    """A^(n+1) -> (+)_i u_i^* A_i^(n+1), coordinatewise u_i."""
    A = cov.base
    free = free_target(A, n)
    legs = module_direct_sum([restrict_scalars(u, free_target(u.target, n).module) for u in cov.legs], A)
    columns = []
    for k in range(free.module.carrier.total):
        basis = free.module.carrier.basis_vector(k)
        column = [ZERO] * legs.module.carrier.total
        for u, inj in zip(cov.legs, legs.injections):
            local = free_target(u.target, n)
            value = [ZERO] * local.module.carrier.total
            for proj, local_inj in zip(free.projections, local.injections):
                a = proj.apply(basis)
                if any(a):
                    for r, v in enumerate(local_inj.apply(u.apply(a))):
                        value[r] += v
            for r, v in enumerate(inj.apply(value)):
                column[r] += v
        columns.append(column)
    return legs, linalg.from_columns(columns, legs.module.carrier.total)


def overlap_transitions(cov: Covering, points: Sequence[ProjPoint]) -> tuple[dict, CheckReport]:
    """theta_ij = r_j x_i on A_ij when the two restricted subobjects agree."""
    report = CheckReport("overlap_compatibility")
    transitions = {}
    for i, j in itertools.combinations(range(len(cov.legs)), 2):
        ov = cov.overlap(i, j)
        pi = base_change_point(ov.left, points[i])
        pj = base_change_point(ov.right, points[j])
        report.checked += 1
        if not points_equal(pi, pj):
            report.fail({"overlap": [i, j], "reason": "local points differ on the overlap"})
            continue
        transitions[i, j] = compose_module_maps(pj.retraction, pi.mono)
    return transitions, report


def sheaf_condition_instance(
    cov: Covering,
    points: Sequence[ProjPoint],
    transitions: Mapping[tuple[int, int], object] | None = None,
) -> tuple[ProjPoint | None, CheckReport]:
    """Glue compatible local points into a point over the base."""
    if len(points) != len(cov.legs):
        raise InputError("one local point per leg is required")
    if not points:
        raise InputError("a covering needs at least one leg")
    n = points[0].n
    for k, (p, u) in enumerate(zip(points, cov.legs)):
        if p.algebra is not u.target or p.n != n:
            raise InputError("local point over the wrong algebra or dimension", location=f"points[{k}]")
    if transitions is None:
        transitions, report = overlap_transitions(cov, points)
        if not report.passed:
            return None, report
    else:
        report = CheckReport("overlap_compatibility")
    datum = descent_datum(cov, [p.line for p in points], transitions)
    glued = glue(datum)
    report = report.merge(glued.report)
    product = product_line([p.line for p in points])
    report.checked += 1
    if not product.line:
        report.fail({"condition": "product of the local lines is a line object"})
    legs, restriction = _restriction_to_legs(cov, n)
    local = linalg.zeros(legs.module.carrier.total, glued.module.carrier.total)
    for p, inj, section in zip(points, legs.injections, glued.sections):
        local = linalg.add(local, linalg.chain(inj.map.matrix, p.mono.map.matrix, section.map.matrix))
    x = linalg.solve(restriction, local)
    report.checked += 1
    if x is None:
        report.fail({"condition": "local monos descend to A^(n+1)"})
        return None, report
    mono = module_map(glued.module, free_target(cov.base, n).module, x)
    point, verdict = verify_point(cov.base, n, glued.module, mono)
    report = report.merge(verdict)
    logger.debug("sheaf condition: glued line dims %s, point %s", glued.module.carrier.dims, point is not None)
    return point, report


def field_cover_check(K: AlgebraInC, n: int, points: Sequence[ProjPoint]) -> CheckReport:
    """Every point over a field object lies in some chart."""
    if not is_field_object(K):
        raise InputError("the algebra is not a field object")
    report = CheckReport("field_cover")
    charts = []
    for k, p in enumerate(points):
        if p.algebra is not K or p.n != n:
            raise InputError("point over the wrong algebra or dimension", location=f"points[{k}]")
        report.checked += 1
        chart = next((i for i in range(n + 1) if chart_membership(p, i)), None)
        if chart is None:
            logger.warning("point %s over a field object lies in no chart", k)
            report.fail({"point": k, "reason": "no chart contains the point"})
        charts.append(chart)
    report.details = {"charts": charts}
    return report


def _random_unit(A: AlgebraInC, rng: random.Random, attempts: int = 32) -> Vector:
    for _ in range(attempts):
        c = tuple(v if A.carrier.degrees[k] == A.identity_degree else ZERO for k, v in enumerate(random_element(A, rng)))
        if element_inverse(A, c) is not None:
            return c
    return A.unit


def random_point(A: AlgebraInC, n: int, rng: random.Random) -> ProjPoint:
    """A chart point rescaled by a random invertible identity-degree element."""
    i = rng.randrange(n + 1)
    coords = [
        tuple(v if A.carrier.degrees[k] == A.identity_degree else ZERO for k, v in enumerate(random_element(A, rng)))
        for _ in range(n)
    ]
    base = point_from_chart(A, n, i, coords)
    c = _random_unit(A, rng)
    scale = ModuleMap(base.line, base.line, GradedMap.from_matrix(A.carrier, A.carrier, _right_multiplication(A, c)))
    unscale = ModuleMap(
        base.line, base.line, GradedMap.from_matrix(A.carrier, A.carrier, _right_multiplication(A, element_inverse(A, c)))
    )
    return ProjPoint(
        A,
        n,
        base.line,
        compose_module_maps(base.mono, scale),
        compose_module_maps(unscale, base.retraction),
        base.line_cert,
    )
