"""Commutative algebras in the twisted category and their ideal theory.

Everything is finite-dimensional, so localization is a quotient (Fitting
stabilization) and maximal ideals come from the degree-e part modulo its
trace-form radical.
"""
import functools
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import sympy
from sympy.polys.matrices import DomainMatrix

from helpers.logging import logger
from relproj import linalg
from relproj.cochain_core import (
    Cochain2,
    GradingGroup,
    braiding,
    coboundary3,
    octonion_cochain,
    trivial_cochain,
)
from relproj.errors import InputError
from relproj.graded_linear import (
    GradedMap,
    GradedSpace,
    GradedSubspace,
    compose,
    identity_map,
    kernel_subspace,
    quotient_by,
    unit_object,
)
from relproj.linalg import ONE, ZERO, Vector
from relproj.report import CheckReport

Product = tuple[tuple[int, Fraction], ...]

# witnesses kept per identity family in randomized reports
_MAX_WITNESSES = 5


@dataclass(frozen=True, eq=False)
class AlgebraInC:
    """Carrier, sparse structure constants and unit.

    ``table[i][j]`` lists the nonzero (k, c) with e_i e_j = sum c e_k.
    """

    cochain: Cochain2
    carrier: GradedSpace
    table: tuple[tuple[Product, ...], ...]
    unit: Vector
    name: str = ""

    @property
    def group(self) -> GradingGroup:
        return self.carrier.group

    @property
    def phi(self):
        return coboundary3(self.cochain)

    @property
    def ratio(self) -> Cochain2:
        return braiding(self.cochain)

    @property
    def dimension(self) -> int:
        return self.carrier.total

    @property
    def identity_degree(self) -> int:
        return self.group.index(self.group.identity)

    @property
    def degree_zero(self) -> range:
        return self.carrier.span(self.identity_degree)

    def basis(self, k: int) -> Vector:
        return self.carrier.basis_vector(k)

    def product(self, i: int, j: int) -> Vector:
        result = [ZERO] * self.dimension
        for k, c in self.table[i][j]:
            result[k] += c
        return tuple(result)

    def multiply(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
        result = [ZERO] * self.dimension
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = self.table[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                for k, v in row[j]:
                    result[k] += c * v
        return tuple(result)

    @functools.cached_property
    def left_matrices(self) -> tuple[DomainMatrix, ...]:
        n = self.dimension
        return tuple(
            linalg.sparse(
                {(k, j): v for j in range(n) for k, v in self.table[i][j]}, (n, n)
            )
            for i in range(n)
        )

    def left_operator(self, a: Sequence[Fraction]) -> DomainMatrix:
        n = self.dimension
        entries = {}
        for i, ai in enumerate(a):
            if ai:
                for j in range(n):
                    for k, v in self.table[i][j]:
                        entries[k, j] = entries.get((k, j), ZERO) + ai * v
        return linalg.sparse(entries, (n, n))

    def is_degree_zero(self, a: Sequence[Fraction]) -> bool:
        return all(not v for k, v in enumerate(a) if self.carrier.degrees[k] != self.identity_degree)


def _sparse_table(products: dict[tuple[int, int], Sequence[Fraction]], n: int):
    return tuple(
        tuple(
            tuple((k, Fraction(v)) for k, v in enumerate(products.get((i, j), ())) if v)
            for j in range(n)
        )
        for i in range(n)
    )


def algebra_from_structure(
    cochain: Cochain2,
    carrier: GradedSpace,
    products: dict[tuple[int, int], Sequence[Fraction]],
    unit: Sequence[Fraction],
    name: str = "",
) -> AlgebraInC:
    if carrier.group != cochain.group:
        raise InputError("carrier and cochain use different grading groups")
    n = carrier.total
    if len(unit) != n:
        raise InputError(f"unit must have {n} coordinates")
    s = carrier.group.sum_table
    e = carrier.group.index(carrier.group.identity)
    for (i, j), vector in products.items():
        if not (0 <= i < n and 0 <= j < n) or len(vector) != n:
            raise InputError(f"bad structure constant entry for ({i}, {j})")
        target = s[carrier.degrees[i]][carrier.degrees[j]]
        for k, v in enumerate(vector):
            if v and carrier.degrees[k] != target:
                raise InputError("multiplication is not degree-additive", location=f"({i}, {j}) -> {k}")
    if any(v and carrier.degrees[k] != e for k, v in enumerate(unit)):
        raise InputError("unit must lie in the identity degree")
    return AlgebraInC(cochain, carrier, _sparse_table(products, n), tuple(Fraction(v) for v in unit), name)


def twisted_group_algebra(group: GradingGroup, F: Cochain2, name: str = "") -> AlgebraInC:
    """Basis e_g, product e_x e_y = F(x, y) e_{x+y}."""
    if F.group != group:
        raise InputError("cochain lives on a different group")
    n = group.size
    s = group.sum_table
    table = tuple(tuple(((s[x][y], F.at(x, y)),) for y in range(n)) for x in range(n))
    carrier = GradedSpace(group, tuple(1 for _ in range(n)))
    e = group.index(group.identity)
    unit = tuple(ONE if k == e else ZERO for k in range(n))
    return AlgebraInC(F, carrier, table, unit, name or "twisted_group_algebra")


def octonions() -> AlgebraInC:
    F = octonion_cochain()
    return twisted_group_algebra(F.group, F, name="octonions")


def ground_algebra(cochain: Cochain2 | None = None) -> AlgebraInC:
    cochain = cochain or trivial_cochain(GradingGroup(()))
    carrier = unit_object(cochain.group)
    return algebra_from_structure(cochain, carrier, {(0, 0): (ONE,)}, (ONE,), name="ground")


def _trivially_graded(cochain: Cochain2, dim: int) -> GradedSpace:
    group = cochain.group
    e = group.index(group.identity)
    return GradedSpace(group, tuple(dim if g == e else 0 for g in range(group.size)))


def product_of_fields(n: int, cochain: Cochain2 | None = None) -> AlgebraInC:
    """Q x ... x Q (n factors) concentrated in the identity degree."""
    cochain = cochain or trivial_cochain(GradingGroup(()))
    carrier = _trivially_graded(cochain, n)
    products = {(i, i): tuple(ONE if k == i else ZERO for k in range(n)) for i in range(n)}
    return algebra_from_structure(cochain, carrier, products, (ONE,) * n, name=f"Q^{n}")


def dual_numbers(cochain: Cochain2 | None = None) -> AlgebraInC:
    """Q[eps]/(eps^2) with basis (1, eps)."""
    cochain = cochain or trivial_cochain(GradingGroup(()))
    carrier = _trivially_graded(cochain, 2)
    products = {(0, 0): (ONE, ZERO), (0, 1): (ZERO, ONE), (1, 0): (ZERO, ONE)}
    return algebra_from_structure(cochain, carrier, products, (ONE, ZERO), name="dual_numbers")


def with_product(A: AlgebraInC, i: int, j: int, vector: Sequence[Fraction]) -> AlgebraInC:
    """Copy of A with one structure constant replaced (perturbation oracle)."""
    rows = [list(row) for row in A.table]
    rows[i][j] = tuple((k, Fraction(v)) for k, v in enumerate(vector) if v)
    table = tuple(tuple(row) for row in rows)
    return AlgebraInC(A.cochain, A.carrier, table, A.unit, A.name + "*")


def degree_zero_part(A: AlgebraInC) -> AlgebraInC:
    """A_e as an algebra concentrated in the identity degree."""
    idx = list(A.degree_zero)
    products = {
        (a, b): tuple(A.product(idx[a], idx[b])[k] for k in idx)
        for a in range(len(idx))
        for b in range(len(idx))
    }
    unit = tuple(A.unit[k] for k in idx)
    return algebra_from_structure(A.cochain, _trivially_graded(A.cochain, len(idx)), products, unit, A.name + "_e")


def check_algebra_axioms(A: AlgebraInC) -> CheckReport:
    """Unit laws, associativity up to phi and commutativity up to R, on basis tuples."""
    n = A.dimension
    deg = A.carrier.degrees
    phi, R = A.phi, A.ratio
    report = CheckReport("algebra_axioms")
    counts = {"unit": 0, "associativity": 0, "commutativity": 0}
    for i in range(n):
        counts["unit"] += 1
        e_i = A.basis(i)
        if A.multiply(A.unit, e_i) != e_i or A.multiply(e_i, A.unit) != e_i:
            report.fail({"law": "unit", "basis": [i]})
    for i, j, k in itertools.product(range(n), repeat=3):
        counts["associativity"] += 1
        left = A.multiply(A.product(i, j), A.basis(k))
        right = A.multiply(A.basis(i), A.product(j, k))
        c = phi.at(deg[i], deg[j], deg[k])
        if left != tuple(c * v for v in right):
            report.fail({"law": "associativity", "basis": [i, j, k]})
    for i, j in itertools.product(range(n), repeat=2):
        counts["commutativity"] += 1
        c = R.at(deg[i], deg[j])
        if A.product(i, j) != tuple(c * v for v in A.product(j, i)):
            report.fail({"law": "commutativity", "basis": [i, j]})
    report.checked = sum(counts.values())
    report.details = counts
    return report


def random_element(A: AlgebraInC, rng: random.Random, spread: int = 4) -> Vector:
    return tuple(
        Fraction(rng.randint(-spread, spread), rng.randint(1, 3)) for _ in range(A.dimension)
    )


def _norm(a: Sequence[Fraction]) -> Fraction:
    return sum((v * v for v in a), ZERO)


def underlying_identities(A: AlgebraInC, trials: int, seed: int) -> CheckReport:
    """Alternativity, Moufang, norm multiplicativity on random elements, plus
    the non-associativity witness (e1 e2) e4 != e1 (e2 e4) when the group is Z2^3."""
    rng = random.Random(seed)
    m = A.multiply
    families = {
        "left_alternative": lambda x, y, z: m(m(x, x), y) == m(x, m(x, y)),
        "right_alternative": lambda x, y, z: m(y, m(x, x)) == m(m(y, x), x),
        "moufang": lambda x, y, z: m(m(m(x, y), x), z) == m(x, m(y, m(x, z))),
        "norm_multiplicative": lambda x, y, z: _norm(m(x, y)) == _norm(x) * _norm(y),
    }
    report = CheckReport("underlying_identities")
    failures = {name: 0 for name in families}
    for trial in range(trials):
        x, y, z = (random_element(A, rng) for _ in range(3))
        for name, holds in families.items():
            report.checked += 1
            if not holds(x, y, z):
                failures[name] += 1
                if failures[name] <= _MAX_WITNESSES:
                    report.fail({"identity": name, "trial": trial, "x": list(x), "y": list(y), "z": list(z)})
    report.details = {"trials": trials, "seed": seed, "failures": failures, "witness": _associativity_witness(A)}
    return report


def _associativity_witness(A: AlgebraInC) -> str:
    group = A.group
    if group.orders != (2, 2, 2) or any(d != 1 for d in A.carrier.dims):
        return "not applicable"
    e1, e2, e4 = (A.basis(A.carrier.offsets[group.index(g)]) for g in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    left = A.multiply(A.multiply(e1, e2), e4)
    right = A.multiply(e1, A.multiply(e2, e4))
    return "non-associative" if left != right else "associative"


@dataclass(frozen=True, eq=False)
class ElementEndo:
    """Multiplication by a degree-e element, an A-linear endomorphism of A."""

    algebra: AlgebraInC
    element: Vector

    def __post_init__(self):
        if len(self.element) != self.algebra.dimension or not self.algebra.is_degree_zero(self.element):
            raise InputError("element endomorphisms need a vector in the identity degree")

    @functools.cached_property
    def map(self) -> GradedMap:
        A = self.algebra
        return GradedMap.from_matrix(A.carrier, A.carrier, A.left_operator(self.element))


def endo(A: AlgebraInC, element: Sequence) -> ElementEndo:
    return ElementEndo(A, tuple(Fraction(v) for v in element))


def element_endos(A: AlgebraInC) -> list[ElementEndo]:
    return [ElementEndo(A, A.basis(k)) for k in A.degree_zero]


@dataclass(frozen=True)
class Ideal:
    ambient: AlgebraInC
    subspace: GradedSubspace

    def is_whole(self) -> bool:
        return self.subspace.is_whole()

    def is_zero(self) -> bool:
        return self.subspace.is_zero()

    def is_closed(self) -> bool:
        A = self.ambient
        products = [A.multiply(A.basis(i), v) for i in range(A.dimension) for v in self.subspace.vectors()]
        return all(self.subspace.contains_vector(p) for p in products)


def zero_ideal(A: AlgebraInC) -> Ideal:
    return Ideal(A, GradedSubspace.zero(A.carrier))


def whole_ideal(A: AlgebraInC) -> Ideal:
    return Ideal(A, GradedSubspace.whole(A.carrier))


def generated_ideal(A: AlgebraInC, gens: Sequence[ElementEndo | Sequence[Fraction]]) -> Ideal:
    """Closure of the generators under multiplication by basis elements."""
    vectors = [g.element if isinstance(g, ElementEndo) else tuple(Fraction(v) for v in g) for g in gens]
    current = GradedSubspace.from_vectors(A.carrier, vectors)
    rounds = 0
    while True:
        rounds += 1
        basis = current.vectors()
        grown = GradedSubspace.from_vectors(
            A.carrier, basis + [A.multiply(A.basis(i), v) for i in range(A.dimension) for v in basis]
        )
        if grown == current:
            break
        current = grown
    logger.debug("generated ideal: dims %s after %s rounds", current.dims, rounds)
    return Ideal(A, current)


def _restrict_to_degree_zero(A: AlgebraInC, v: Sequence[Fraction]) -> list[Fraction]:
    return [v[k] for k in A.degree_zero]


def partition_of_unity(A: AlgebraInC, family: Sequence[ElementEndo]) -> list[ElementEndo] | None:
    """(s_i) with sum s_i f_i = id, or None when the family does not generate A."""
    zero_idx = list(A.degree_zero)
    columns = [
        _restrict_to_degree_zero(A, A.multiply(A.basis(b), f.element))
        for f in family
        for b in zero_idx
    ]
    system = linalg.from_columns(columns, len(zero_idx))
    rhs = linalg.column(_restrict_to_degree_zero(A, A.unit))
    solution = linalg.solve(system, rhs)
    if solution is None:
        return None
    coeffs = linalg.flat(solution)
    certificate = []
    for i in range(len(family)):
        element = [ZERO] * A.dimension
        for pos, b in enumerate(zero_idx):
            element[b] = coeffs[i * len(zero_idx) + pos]
        certificate.append(ElementEndo(A, tuple(element)))
    total = linalg.zeros(A.dimension, A.dimension)
    for s, f in zip(certificate, family):
        total = linalg.add(total, linalg.mul(s.map.matrix, f.map.matrix))
    if not linalg.equal(total, linalg.identity(A.dimension)):
        raise ArithmeticError("partition of unity certificate failed verification")
    return certificate


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """Degree-preserving algebra map; ``kind`` records how it was built."""

    source: AlgebraInC
    target: AlgebraInC
    map: GradedMap
    kind: str = "general"
    element: Vector | None = None
    details: dict = field(default_factory=dict)

    def apply(self, a: Sequence[Fraction]) -> Vector:
        return self.map.apply(a)


def check_algebra_map(u: AlgebraMap) -> CheckReport:
    A, B = u.source, u.target
    report = CheckReport("algebra_map")
    report.checked += 1
    if u.apply(A.unit) != B.unit:
        report.fail({"law": "unit"})
    images = [u.apply(A.basis(i)) for i in range(A.dimension)]
    for i, j in itertools.product(range(A.dimension), repeat=2):
        report.checked += 1
        if u.apply(A.product(i, j)) != B.multiply(images[i], images[j]):
            report.fail({"law": "multiplicative", "basis": [i, j]})
    return report


def algebra_map(source: AlgebraInC, target: AlgebraInC, m: DomainMatrix, kind: str = "general") -> AlgebraMap:
    """Validated constructor; non-multiplicative maps are input errors."""
    u = AlgebraMap(source, target, GradedMap.from_matrix(source.carrier, target.carrier, m), kind)
    report = check_algebra_map(u)
    if not report.passed:
        raise InputError("not an algebra map", location=str(report.violations[0]))
    return u


def identity_algebra_map(A: AlgebraInC) -> AlgebraMap:
    return AlgebraMap(A, A, identity_map(A.carrier), kind="identity")


def compose_algebra_maps(v: AlgebraMap, u: AlgebraMap) -> AlgebraMap:
    """v after u."""
    kind = u.kind if v.kind == "identity" else v.kind if u.kind == "identity" else "composite"
    return AlgebraMap(u.source, v.target, compose(v.map, u.map), kind)


def quotient_algebra(A: AlgebraInC, I: Ideal, kind: str = "quotient") -> tuple[AlgebraInC, AlgebraMap]:
    q = quotient_by(I.subspace)
    n = q.space.total
    lifts = [q.section.apply(q.space.basis_vector(i)) for i in range(n)]
    products = {
        (i, j): q.projection.apply(A.multiply(lifts[i], lifts[j])) for i in range(n) for j in range(n)
    }
    quotient = algebra_from_structure(A.cochain, q.space, products, q.projection.apply(A.unit), A.name + "/I")
    return quotient, AlgebraMap(A, quotient, q.projection, kind, details={"section": q.section})


def element_inverse(A: AlgebraInC, a: Sequence[Fraction]) -> Vector | None:
    """Inverse of a degree-e element, if it has one."""
    if not A.is_degree_zero(a):
        raise InputError("only identity-degree elements are inverted here")
    zero_idx = list(A.degree_zero)
    columns = [_restrict_to_degree_zero(A, A.multiply(a, A.basis(b))) for b in zero_idx]
    solution = linalg.solve(
        linalg.from_columns(columns, len(zero_idx)),
        linalg.column(_restrict_to_degree_zero(A, A.unit)),
    )
    if solution is None:
        return None
    coeffs = linalg.flat(solution)
    result = [ZERO] * A.dimension
    for pos, b in enumerate(zero_idx):
        result[b] = coeffs[pos]
    return tuple(result)


def fitting_exponent(m: DomainMatrix) -> int:
    """Smallest N >= 1 with rank(m^N) = rank(m^(N+1))."""
    exponent = 1
    current = m
    r = linalg.rank(current)
    while True:
        current = linalg.mul(m, current)
        r_next = linalg.rank(current)
        if r_next == r:
            return exponent
        exponent += 1
        r = r_next


class Localization(NamedTuple):
    algebra: AlgebraInC
    map: AlgebraMap


def localize(A: AlgebraInC, f: ElementEndo) -> Localization:
    """A_f = A / ker f^N for the Fitting exponent N of f."""
    F = f.map.matrix
    exponent = fitting_exponent(F)
    power = GradedMap.from_matrix(A.carrier, A.carrier, linalg.power(F, exponent))
    kernel_ideal = Ideal(A, kernel_subspace(power))
    local, u = quotient_algebra(A, kernel_ideal, kind="localization")
    u = AlgebraMap(
        A, local, u.map, "localization", f.element, details={**u.details, "exponent": exponent}
    )
    logger.debug("localization: exponent %s, dims %s -> %s", exponent, A.carrier.dims, local.carrier.dims)
    return Localization(local, u)


def inverse_in_localization(u: AlgebraMap) -> Vector | None:
    """Inverse of the image of the localizing element."""
    return element_inverse(u.target, u.apply(u.element))


def factor_through_localization(u: AlgebraMap, v: AlgebraMap) -> AlgebraMap | None:
    """The unique w with w u = v when v inverts the localizing element, else None."""
    if element_inverse(v.target, v.apply(u.element)) is None:
        return None
    section = u.details["section"]
    w = AlgebraMap(u.target, v.target, compose(v.map, section), "induced")
    if not compose(w.map, u.map).equals(v.map) or not check_algebra_map(w).passed:
        return None
    return w


def _operator_rows(ops: Sequence[DomainMatrix]) -> list[list[Fraction]]:
    return [[v for row in linalg.entries(op) for v in row] for op in ops]


@dataclass(frozen=True, eq=False)
class OperatorAlgebra:
    """An associative algebra of operators, given by an echelon basis."""

    size: int
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @functools.cached_property
    def basis(self) -> tuple[DomainMatrix, ...]:
        n = self.size
        return tuple(
            linalg.matrix([list(r[i * n : (i + 1) * n]) for i in range(n)], (n, n)) for r in self.rows
        )

    @functools.cached_property
    def _pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, v in enumerate(r) if v) for r in self.rows)

    def coordinates(self, op: DomainMatrix) -> list[Fraction]:
        flat = _operator_rows([op])[0]
        return [flat[p] for p in self._pivots]

    def structure_constants(self) -> list[list[list[Fraction]]]:
        return [[self.coordinates(linalg.mul(a, b)) for b in self.basis] for a in self.basis]


def enveloping_action_algebra(A: AlgebraInC, M=None) -> OperatorAlgebra:
    """Span of all composites of action operators, closed under composition.

    ``M`` is any object with ``carrier`` and ``action``; None means A on itself.
    """
    action = list(M.action) if M is not None else list(A.left_matrices)
    n = M.carrier.total if M is not None else A.dimension
    width = n * n
    rows = linalg.row_space(_operator_rows([linalg.identity(n)] + action), width)
    rounds = 0
    while True:
        rounds += 1
        span = OperatorAlgebra(n, tuple(tuple(r) for r in rows))
        products = [linalg.mul(b, g) for b in span.basis for g in action]
        grown = linalg.row_space(rows + _operator_rows(products), width)
        if len(grown) == len(rows):
            break
        rows = grown
    logger.debug("enveloping algebra: dimension %s after %s rounds", len(rows), rounds)
    return OperatorAlgebra(n, tuple(tuple(r) for r in rows))


class _Semisimple:
    """A_e modulo its radical, with multiplication on coordinate vectors."""

    def __init__(self, A: AlgebraInC):
        self.A = A
        self.idx = list(A.degree_zero)
        d = len(self.idx)
        ops = [self._restricted_operator(A.basis(k)) for k in self.idx]
        form = linalg.matrix([[linalg.trace(linalg.mul(a, b)) for b in ops] for a in ops], (d, d))
        self.radical = linalg.row_space(linalg.nullspace(form), d)
        projection, section = linalg.complement_projection(self.radical, d)
        self.projection = projection
        self.section = section
        self.dimension = projection.shape[0]
        self.unit = self.project(_restrict_to_degree_zero(A, A.unit))

    def _restricted_operator(self, a: Vector) -> DomainMatrix:
        cols = [_restrict_to_degree_zero(self.A, self.A.multiply(a, self.A.basis(b))) for b in self.idx]
        return linalg.from_columns(cols, len(self.idx))

    def lift(self, x: Sequence[Fraction]) -> Vector:
        local = linalg.flat(linalg.mul(self.section, linalg.column(x)))
        full = [ZERO] * self.A.dimension
        for pos, k in enumerate(self.idx):
            full[k] = local[pos]
        return tuple(full)

    def project(self, local: Sequence[Fraction]) -> Vector:
        return linalg.flat(linalg.mul(self.projection, linalg.column(local)))

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        return self.project(_restrict_to_degree_zero(self.A, self.A.multiply(self.lift(x), self.lift(y))))

    def minimal_polynomial(self, x: Vector, unit: Vector) -> list[Fraction]:
        """Monic coefficients, highest degree first, of x inside the unital algebra with ``unit``."""
        powers = [unit]
        while True:
            nxt = self.multiply(x, powers[-1])
            system = linalg.from_columns(powers, self.dimension)
            solution = linalg.solve(system, linalg.column(nxt))
            if solution is not None:
                coeffs = linalg.flat(solution)
                return [ONE] + [-c for c in reversed(coeffs)]
            powers.append(nxt)

    def evaluate(self, coeffs: Sequence[Fraction], x: Vector, unit: Vector) -> Vector:
        result = tuple(ZERO for _ in range(self.dimension))
        for c in coeffs:
            result = tuple(a + c * u for a, u in zip(self.multiply(result, x), unit))
        return result

    def subalgebra_dimension(self, eta: Vector) -> int:
        images = [self.multiply(eta, tuple(ONE if i == k else ZERO for i in range(self.dimension))) for k in range(self.dimension)]
        return len(linalg.row_space(images, self.dimension))


def _to_poly(coeffs: Sequence[Fraction], t: sympy.Symbol) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], t, domain="QQ")


def _from_poly(p: sympy.Poly) -> list[Fraction]:
    return [Fraction(int(c.p), int(c.q)) for c in p.all_coeffs()]


def _split(S: _Semisimple, eta: Vector, rng: random.Random, attempts: int = 64) -> tuple[Vector, Vector] | None:
    """Split the idempotent eta into two orthogonal idempotents, or None if eta S is a field."""
    t = sympy.Symbol("t")
    dim = S.subalgebra_dimension(eta)
    unit_vectors = [tuple(ONE if i == k else ZERO for i in range(S.dimension)) for k in range(S.dimension)]
    candidates = itertools.chain(
        (S.multiply(eta, b) for b in unit_vectors),
        (S.multiply(eta, tuple(Fraction(rng.randint(-9, 9)) for _ in range(S.dimension))) for _ in range(attempts)),
    )
    for x in candidates:
        poly = _to_poly(S.minimal_polynomial(x, eta), t)
        _, factors = poly.factor_list()
        if len(factors) > 1:
            first = factors[0][0]
            rest = sympy.Poly(1, t, domain="QQ")
            for f, k in factors[1:]:
                rest = rest * f**k
            s, r, h = first.gcdex(rest)
            piece = S.evaluate(_from_poly(r * rest), x, eta)
            other = tuple(a - b for a, b in zip(eta, piece))
            return piece, other
        if poly.degree() == dim:
            return None
    raise ArithmeticError("could not decide whether an idempotent is primitive")


def _primitive_idempotents(S: _Semisimple) -> list[Vector]:
    rng = random.Random(0)
    pending = [S.unit]
    done = []
    while pending:
        eta = pending.pop()
        pieces = _split(S, eta, rng)
        if pieces is None:
            done.append(eta)
        else:
            pending.extend(pieces)
    return done


def _graded_lift(A: AlgebraInC, p_rows: Sequence[Sequence[Fraction]]) -> GradedSubspace:
    """Largest graded ideal whose identity-degree part lies in span(p_rows)."""
    d = len(A.degree_zero)
    functionals = linalg.nullspace(linalg.matrix([list(r) for r in p_rows], (len(p_rows), d))) if p_rows else [
        [ONE if i == k else ZERO for i in range(d)] for k in range(d)
    ]
    group = A.group
    vectors = []
    for g in range(group.size):
        span = list(A.carrier.span(g))
        if not span:
            continue
        minus = A.carrier.span(group.neg_table[g])
        rows = []
        for b in minus:
            for c in functionals:
                rows.append(
                    [
                        sum(
                            (ci * v for ci, v in zip(c, _restrict_to_degree_zero(A, A.product(b, a)))),
                            ZERO,
                        )
                        for a in span
                    ]
                )
        system = linalg.matrix(rows, (len(rows), len(span))) if rows else linalg.zeros(0, len(span))
        for sol in linalg.nullspace(system):
            v = [ZERO] * A.dimension
            for pos, a in enumerate(span):
                v[a] = sol[pos]
            vectors.append(v)
    return GradedSubspace.from_vectors(A.carrier, vectors)


def maximal_ideals(A: AlgebraInC) -> list[Ideal]:
    """Every maximal graded ideal, sorted by canonical echelon basis."""
    if A.dimension == 0:
        return []
    S = _Semisimple(A)
    d = len(S.idx)
    result = []
    for eta in _primitive_idempotents(S):
        complement = tuple(a - b for a, b in zip(S.unit, eta))
        images = [
            S.multiply(complement, tuple(ONE if i == k else ZERO for i in range(S.dimension)))
            for k in range(S.dimension)
        ]
        lifted = [
            linalg.flat(linalg.mul(S.section, linalg.column(v))) for v in images
        ]
        p_rows = linalg.row_space(list(S.radical) + lifted, d)
        result.append(Ideal(A, _graded_lift(A, p_rows)))
    result.sort(key=lambda I: I.subspace.sort_key())
    logger.debug("maximal ideals: %s", [I.subspace.dims for I in result])
    return result


def maximal_ideal_above(A: AlgebraInC, I: Ideal) -> Ideal:
    if I.is_whole():
        raise InputError("the ideal is not proper")
    quotient, q = quotient_algebra(A, I)
    section = q.details["section"]
    candidates = []
    for M in maximal_ideals(quotient):
        lifted = [section.apply(v) for v in M.subspace.vectors()]
        candidates.append(
            Ideal(A, GradedSubspace.from_vectors(A.carrier, I.subspace.vectors() + lifted))
        )
    return min(candidates, key=lambda J: J.subspace.sort_key())


def is_field_object(A: AlgebraInC) -> bool:
    if A.dimension == 0:
        raise InputError("the zero algebra is not a field object")
    if all(d <= 1 for d in A.carrier.dims):
        return all(generated_ideal(A, [A.basis(k)]).is_whole() for k in range(A.dimension))
    return maximal_ideal_above(A, zero_ideal(A)).is_zero()
