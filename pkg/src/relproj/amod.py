"""Modules over commutative algebras in the twisted category.

Module actions are held as one operator per algebra basis vector. Tensor
products over A are cokernels of the two actions of A on M (x) N, and the
inner hom is an equalizer inside the space of degree-shifted morphism data.
"""
import functools
import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from sympy.polys.matrices import DomainMatrix

from helpers.logging import logger
from relproj import linalg
from relproj.calg import (
    AlgebraInC,
    AlgebraMap,
    Ideal,
    algebra_from_structure,
    check_algebra_map,
    compose_algebra_maps,
    octonions,
)
from relproj.errors import InputError
from relproj.graded_linear import (
    GradedMap,
    GradedSpace,
    GradedSubspace,
    TensorProduct,
    compose,
    direct_sum,
    identity_map,
    is_epi,
    is_invertible,
    is_mono,
    quotient_by,
    tensor,
    tensor_maps,
    tensor_vector,
)
from relproj.linalg import ONE, ZERO, Vector
from relproj.report import CheckReport

Columns = tuple[tuple[tuple[int, Fraction], ...], ...]


@dataclass(frozen=True, eq=False)
class ModuleInC:
    """``action[p]`` is rho(e_p, -) as an operator on the flat carrier."""

    algebra: AlgebraInC
    carrier: GradedSpace
    action: tuple[DomainMatrix, ...]
    name: str = ""

    def __post_init__(self):
        n = self.carrier.total
        if self.carrier.group != self.algebra.group:
            raise InputError("module and algebra use different grading groups")
        if len(self.action) != self.algebra.dimension or any(op.shape != (n, n) for op in self.action):
            raise InputError("one square action operator per algebra basis vector is required")

    @functools.cached_property
    def columns(self) -> tuple[Columns, ...]:
        """Nonzero entries of every action operator, column by column."""
        n = self.carrier.total
        result = []
        for op in self.action:
            data = linalg.entries(op)
            result.append(tuple(tuple((k, data[k][c]) for k in range(n) if data[k][c]) for c in range(n)))
        return tuple(result)

    def act_matrix(self, a: Sequence[Fraction]) -> DomainMatrix:
        n = self.carrier.total
        result = linalg.zeros(n, n)
        for p, ap in enumerate(a):
            if ap:
                result = linalg.add(result, linalg.scale(self.action[p], ap))
        return result

    def act(self, a: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        result = [ZERO] * self.carrier.total
        for p, ap in enumerate(a):
            if not ap:
                continue
            for c, vc in enumerate(v):
                if vc:
                    for k, value in self.columns[p][c]:
                        result[k] += ap * vc * value
        return tuple(result)


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: ModuleInC
    target: ModuleInC
    map: GradedMap

    def apply(self, v: Sequence[Fraction]) -> Vector:
        return self.map.apply(v)


def _same_algebra(*modules: ModuleInC) -> AlgebraInC:
    A = modules[0].algebra
    if any(M.algebra is not A for M in modules):
        raise InputError("modules over different algebras")
    return A


def module_from_structure(
    A: AlgebraInC, carrier: GradedSpace, action: Mapping[tuple[int, int], Sequence[Fraction]], name: str = ""
) -> ModuleInC:
    """``action[(p, c)]`` is rho(e_p, x_c); unlisted pairs act by zero."""
    n = carrier.total
    s = A.group.sum_table
    entries = defaultdict(dict)
    for (p, c), vector in action.items():
        if not (0 <= p < A.dimension and 0 <= c < n) or len(vector) != n:
            raise InputError(f"bad action entry for ({p}, {c})")
        target = s[A.carrier.degrees[p]][carrier.degrees[c]]
        for k, v in enumerate(vector):
            if v:
                if carrier.degrees[k] != target:
                    raise InputError("action is not degree-additive", location=f"({p}, {c}) -> {k}")
                entries[p][k, c] = Fraction(v)
    ops = tuple(linalg.sparse(entries.get(p, {}), (n, n)) for p in range(A.dimension))
    return ModuleInC(A, carrier, ops, name)


def with_action_entry(M: ModuleInC, p: int, row: int, col: int, value) -> ModuleInC:
    """Copy of M with one action coefficient replaced (perturbation oracle)."""
    data = linalg.entries(M.action[p])
    data[row][col] = Fraction(value)
    n = M.carrier.total
    ops = list(M.action)
    ops[p] = linalg.matrix(data, (n, n))
    return ModuleInC(M.algebra, M.carrier, tuple(ops), M.name + "*")


@functools.cache
def regular_module(A: AlgebraInC) -> ModuleInC:
    return ModuleInC(A, A.carrier, A.left_matrices, A.name)


def check_module_axioms(M: ModuleInC) -> CheckReport:
    """Unit and twisted associativity rho(m(a, b), v) = phi rho(a, rho(b, v)) on basis triples."""
    A = M.algebra
    phi = A.phi
    adeg, mdeg = A.carrier.degrees, M.carrier.degrees
    n = M.carrier.total
    report = CheckReport("module_axioms")
    unit = linalg.entries(M.act_matrix(A.unit))
    for v in range(n):
        report.checked += 1
        if any(unit[k][v] != (ONE if k == v else ZERO) for k in range(n)):
            report.fail({"law": "unit", "basis": [v]})
    for p, q in itertools.product(range(A.dimension), repeat=2):
        left = linalg.entries(M.act_matrix(A.product(p, q)))
        right = linalg.entries(linalg.mul(M.action[p], M.action[q]))
        for v in range(n):
            report.checked += 1
            c = phi.at(adeg[p], adeg[q], mdeg[v])
            if any(left[k][v] != c * right[k][v] for k in range(n)):
                report.fail({"law": "associativity", "basis": [p, q, v]})
    logger.debug("module axioms: %s cases, %s violations", report.checked, len(report.violations))
    return report


def check_module_map(f: ModuleMap) -> CheckReport:
    A = _same_algebra(f.source, f.target)
    F = f.map.matrix
    report = CheckReport("module_map")
    for p in range(A.dimension):
        left = linalg.entries(linalg.mul(f.target.action[p], F))
        right = linalg.entries(linalg.mul(F, f.source.action[p]))
        for c in range(f.source.carrier.total):
            report.checked += 1
            if any(left[k][c] != right[k][c] for k in range(f.target.carrier.total)):
                report.fail({"basis": p, "column": c})
    return report


def module_map(source: ModuleInC, target: ModuleInC, m: DomainMatrix) -> ModuleMap:
    """Validated constructor; a non-equivariant matrix is an input error."""
    f = ModuleMap(source, target, GradedMap.from_matrix(source.carrier, target.carrier, m))
    report = check_module_map(f)
    if not report.passed:
        raise InputError("map does not commute with the actions", location=str(report.violations[0]))
    return f


def identity_module_map(M: ModuleInC) -> ModuleMap:
    return ModuleMap(M, M, identity_map(M.carrier))


def compose_module_maps(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    """g after f."""
    return ModuleMap(f.source, g.target, compose(g.map, f.map))


def combine_module_maps(maps: Sequence[ModuleMap], coeffs: Sequence[Fraction]) -> ModuleMap:
    first = maps[0]
    total = linalg.zeros(first.target.carrier.total, first.source.carrier.total)
    for f, c in zip(maps, coeffs):
        if c:
            total = linalg.add(total, linalg.scale(f.map.matrix, c))
    return ModuleMap(first.source, first.target, GradedMap.from_matrix(first.source.carrier, first.target.carrier, total))


def inverse_module_map(f: ModuleMap) -> ModuleMap | None:
    inv = linalg.inverse(f.map.matrix)
    if inv is None:
        return None
    return ModuleMap(f.target, f.source, GradedMap.from_matrix(f.target.carrier, f.source.carrier, inv))


class ModuleSum(NamedTuple):
    module: ModuleInC
    injections: tuple[ModuleMap, ...]
    projections: tuple[ModuleMap, ...]


def module_direct_sum(modules: Sequence[ModuleInC], A: AlgebraInC | None = None) -> ModuleSum:
    if not modules:
        if A is None:
            raise InputError("empty direct sum needs an algebra")
        return ModuleSum(ModuleInC(A, direct_sum([], A.group).space, tuple(linalg.zeros(0, 0) for _ in range(A.dimension))), (), ())
    A = _same_algebra(*modules)
    ds = direct_sum([M.carrier for M in modules])
    n = ds.space.total
    ops = []
    for p in range(A.dimension):
        op = linalg.zeros(n, n)
        for M, inj, proj in zip(modules, ds.injections, ds.projections):
            op = linalg.add(op, linalg.chain(inj.matrix, M.action[p], proj.matrix))
        ops.append(op)
    total = ModuleInC(A, ds.space, tuple(ops), "+".join(M.name for M in modules))
    return ModuleSum(
        total,
        tuple(ModuleMap(M, total, inj) for M, inj in zip(modules, ds.injections)),
        tuple(ModuleMap(total, M, proj) for M, proj in zip(modules, ds.projections)),
    )


@functools.cache
def free_rank(A: AlgebraInC, n: int) -> ModuleSum:
    """A^n as a direct sum of regular modules, with its coordinate maps."""
    return module_direct_sum([regular_module(A)] * n, A)


def _tensor_action(left: ModuleInC, T: TensorProduct) -> tuple[DomainMatrix, ...]:
    """rho(a, x (x) y) = phi(|a|, |x|, |y|)^-1 rho(a, x) (x) y."""
    A = left.algebra
    phi = A.phi
    adeg = A.carrier.degrees
    xdeg, ydeg = T.left.degrees, T.right.degrees
    n = T.space.total
    ops = []
    for p in range(A.dimension):
        cols = left.columns[p]
        entries = {}
        for col, (x, y) in enumerate(T.pairs):
            c = 1 / phi.at(adeg[p], xdeg[x], ydeg[y])
            for k, v in cols[x]:
                entries[T.index[k, y], col] = c * v
        ops.append(linalg.sparse(entries, (n, n)))
    return tuple(ops)


@functools.cache
def free_module(A: AlgebraInC, X: GradedSpace) -> ModuleInC:
    T = tensor(A.carrier, X)
    return ModuleInC(A, T.space, _tensor_action(regular_module(A), T), f"{A.name}(x)X")


def free_module_unit(A: AlgebraInC, X: GradedSpace) -> GradedMap:
    """x -> 1 (x) x."""
    T = tensor(A.carrier, X)
    columns = [tensor_vector(T, A.unit, X.basis_vector(x)) for x in range(X.total)]
    return GradedMap.from_matrix(X, T.space, linalg.from_columns(columns, T.space.total))


def adjunction_transpose(A: AlgebraInC, X: GradedSpace, M: ModuleInC, g: GradedMap) -> ModuleMap:
    """The A-linear extension a (x) x -> rho(a, g(x)) of a map X -> |M|."""
    source = free_module(A, X)
    T = tensor(A.carrier, X)
    G = linalg.entries(g.matrix)
    columns = []
    for a, x in T.pairs:
        image = [ZERO] * M.carrier.total
        for j in range(M.carrier.total):
            if G[j][x]:
                for k, v in M.columns[a][j]:
                    image[k] += G[j][x] * v
        columns.append(image)
    m = linalg.from_columns(columns, M.carrier.total)
    return ModuleMap(source, M, GradedMap.from_matrix(source.carrier, M.carrier, m))


def adjunction_inverse(A: AlgebraInC, X: GradedSpace, f: ModuleMap) -> GradedMap:
    return compose(f.map, free_module_unit(A, X))


def submodule(M: ModuleInC, sub: GradedSubspace) -> tuple[ModuleInC, ModuleMap]:
    incl = sub.inclusion()
    ops = []
    for op in M.action:
        restricted = linalg.solve(incl.matrix, linalg.mul(op, incl.matrix))
        if restricted is None:
            raise InputError("subspace is not closed under the action")
        ops.append(restricted)
    module = ModuleInC(M.algebra, sub.space, tuple(ops), M.name + "_sub")
    return module, ModuleMap(module, M, incl)


def ideal_module(I: Ideal) -> tuple[ModuleInC, ModuleMap]:
    return submodule(regular_module(I.ambient), I.subspace)


def quotient_module(M: ModuleInC, sub: GradedSubspace) -> tuple[ModuleInC, ModuleMap]:
    vectors = sub.vectors()
    if not all(sub.contains_vector(M.act(M.algebra.basis(p), v)) for p in range(M.algebra.dimension) for v in vectors):
        raise InputError("subspace is not closed under the action")
    q = quotient_by(sub)
    ops = tuple(linalg.chain(q.projection.matrix, op, q.section.matrix) for op in M.action)
    module = ModuleInC(M.algebra, q.space, ops, M.name + "_quot")
    return module, ModuleMap(M, module, q.projection)


@functools.cache
def restrict_scalars(u: AlgebraMap, N: ModuleInC) -> ModuleInC:
    if N.algebra is not u.target:
        raise InputError("module does not live over the target of the algebra map")
    ops = tuple(N.act_matrix(u.apply(u.source.basis(p))) for p in range(u.source.dimension))
    return ModuleInC(u.source, N.carrier, ops, N.name)


def _hom_variables(M: ModuleInC, N: ModuleInC) -> list[tuple[int, int]]:
    return [
        (r, c)
        for g in range(M.carrier.group.size)
        for c in M.carrier.span(g)
        for r in N.carrier.span(g)
    ]


def _equivariance_rows(M: ModuleInC, N: ModuleInC, index: dict[tuple[int, int], int]) -> list[dict[int, Fraction]]:
    """Rows of N_p F - F M_p = 0 in the entries of a degree-preserving F: M -> N."""
    A = _same_algebra(M, N)
    mdeg = M.carrier.degrees
    rows = []
    for p in range(A.dimension):
        mcols, ncols = M.columns[p], N.columns[p]
        for c in range(M.carrier.total):
            eq = defaultdict(lambda: defaultdict(Fraction))
            for k in N.carrier.span(mdeg[c]):
                for r, v in ncols[k]:
                    eq[r][index[k, c]] += v
            for k, v in mcols[c]:
                for r in N.carrier.span(mdeg[k]):
                    eq[r][index[r, k]] -= v
            rows.extend({var: val for var, val in row.items() if val} for row in eq.values())
    return [row for row in rows if row]


def _sparse_system(rows: Sequence[dict[int, Fraction]], width: int) -> DomainMatrix:
    return linalg.sparse({(i, var): val for i, row in enumerate(rows) for var, val in row.items()}, (len(rows), width))


def _map_from_values(M: ModuleInC, N: ModuleInC, variables, values) -> ModuleMap:
    m = linalg.sparse(dict(zip(variables, values)), (N.carrier.total, M.carrier.total))
    return ModuleMap(M, N, GradedMap.from_matrix(M.carrier, N.carrier, m))


def hom_basis(M: ModuleInC, N: ModuleInC) -> list[ModuleMap]:
    """Echelon basis of Hom_A(M, N)."""
    variables = _hom_variables(M, N)
    index = {v: k for k, v in enumerate(variables)}
    rows = _equivariance_rows(M, N, index)
    basis = linalg.nullspace(_sparse_system(rows, len(variables)))
    return [_map_from_values(M, N, variables, vector) for vector in basis]


def find_isomorphism(M: ModuleInC, N: ModuleInC, seed: int = 0) -> ModuleMap | None:
    """Basis elements first, then small combinations, then seeded generic ones."""
    _same_algebra(M, N)
    if M.carrier.dims != N.carrier.dims:
        return None
    if M.carrier.total == 0:
        return ModuleMap(M, N, GradedMap.from_matrix(M.carrier, N.carrier, linalg.zeros(0, 0)))
    basis = hom_basis(M, N)
    if not basis:
        return None
    k = len(basis)
    rng = random.Random(seed)

    def candidates():
        for i in range(k):
            yield [ONE if j == i else ZERO for j in range(k)]
        for i, j in itertools.combinations(range(min(k, 8)), 2):
            for c in (ONE, -ONE, Fraction(2)):
                coeffs = [ZERO] * k
                coeffs[i], coeffs[j] = ONE, c
                yield coeffs
        for _ in range(8):
            yield [Fraction(rng.randint(-9, 9)) for _ in range(k)]

    for tries, coeffs in enumerate(candidates(), 1):
        f = combine_module_maps(basis, coeffs)
        if is_invertible(f.map):
            logger.debug("isomorphism found after %s candidates (seed %s)", tries, seed)
            return f
    return None


def find_retraction(x: ModuleMap) -> ModuleMap | None:
    """An A-linear r with r x = id, by one exact linear solve."""
    if not is_mono(x.map):
        raise InputError("only monomorphisms have retractions")
    L, M = x.source, x.target
    variables = _hom_variables(M, L)
    index = {v: k for k, v in enumerate(variables)}
    rows = _equivariance_rows(M, L, index)
    rhs = [ZERO] * len(rows)
    X = linalg.entries(x.map.matrix)
    ldeg = L.carrier.degrees
    for q in range(L.carrier.total):
        for p in L.carrier.span(ldeg[q]):
            row = {index[p, k]: X[k][q] for k in M.carrier.span(ldeg[q]) if X[k][q]}
            rows.append(row)
            rhs.append(ONE if p == q else ZERO)
    solution = linalg.solve(_sparse_system(rows, len(variables)), linalg.column(rhs))
    if solution is None:
        return None
    return _map_from_values(M, L, variables, linalg.flat(solution))


def find_section(y: ModuleMap) -> ModuleMap | None:
    """An A-linear s with y s = id."""
    if not is_epi(y.map):
        raise InputError("only epimorphisms have sections")
    M, L = y.source, y.target
    variables = _hom_variables(L, M)
    index = {v: k for k, v in enumerate(variables)}
    rows = _equivariance_rows(L, M, index)
    rhs = [ZERO] * len(rows)
    Y = linalg.entries(y.map.matrix)
    ldeg = L.carrier.degrees
    for q in range(L.carrier.total):
        for p in L.carrier.span(ldeg[q]):
            row = {index[k, q]: Y[p][k] for k in M.carrier.span(ldeg[q]) if Y[p][k]}
            rows.append(row)
            rhs.append(ONE if p == q else ZERO)
    solution = linalg.solve(_sparse_system(rows, len(variables)), linalg.column(rhs))
    if solution is None:
        return None
    return _map_from_values(L, M, variables, linalg.flat(solution))


def has_retraction(x: ModuleMap) -> bool:
    """Independent criterion: some combination of Hom_A(M, L) composes with x to the identity."""
    L = x.source
    basis = hom_basis(x.target, L)
    n = L.carrier.total
    identity = [v for row in linalg.entries(linalg.identity(n)) for v in row]
    columns = [
        [v for row in linalg.entries(linalg.mul(h.map.matrix, x.map.matrix)) for v in row] for h in basis
    ]
    return linalg.solve(linalg.from_columns(columns, n * n), linalg.column(identity)) is not None


@dataclass(frozen=True, eq=False)
class TensorOver:
    """M (x)_A N as a quotient of M (x) N, with projection and section."""

    module: ModuleInC
    left: ModuleInC
    right: ModuleInC
    product: TensorProduct
    relations: GradedSubspace
    projection: GradedMap
    section: GradedMap

    def element(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        return self.projection.apply(tensor_vector(self.product, x, y))

    def kills_relations(self, f: GradedMap) -> bool:
        return all(not any(f.apply(v)) for v in self.relations.vectors())

    def induced(self, f: GradedMap) -> GradedMap:
        """The map out of the quotient determined by f on M (x) N."""
        if not self.kills_relations(f):
            raise InputError("map does not vanish on the tensor relations")
        return compose(f, self.section)

    @functools.cached_property
    def section_pairs(self) -> tuple[tuple[int, int], ...]:
        """The (x, y) pair behind each quotient basis vector."""
        S = linalg.entries(self.section.matrix)
        return tuple(
            self.product.pairs[next(k for k in range(len(S)) if S[k][col])]
            for col in range(self.module.carrier.total)
        )


@functools.cache
def tensor_over(A: AlgebraInC, M: ModuleInC, N: ModuleInC) -> TensorOver:
    if M.algebra is not A or N.algebra is not A:
        raise InputError("modules over a different algebra")
    T = tensor(M.carrier, N.carrier)
    phi, R = A.phi, A.ratio
    adeg, mdeg, ndeg = A.carrier.degrees, M.carrier.degrees, N.carrier.degrees
    relations = []
    for x, a in itertools.product(range(M.carrier.total), range(A.dimension)):
        swap = R.at(mdeg[x], adeg[a])
        for y in range(N.carrier.total):
            v = [ZERO] * T.space.total
            for k, c in M.columns[a][x]:
                v[T.index[k, y]] += swap * c
            f = phi.at(mdeg[x], adeg[a], ndeg[y])
            for k, c in N.columns[a][y]:
                v[T.index[x, k]] -= f * c
            if any(v):
                relations.append(v)
    sub = GradedSubspace.from_vectors(T.space, relations)
    q = quotient_by(sub)
    ops = tuple(linalg.chain(q.projection.matrix, op, q.section.matrix) for op in _tensor_action(M, T))
    module = ModuleInC(A, q.space, ops, f"{M.name}(x){N.name}")
    logger.debug("tensor over A: %s (x) %s -> %s", M.carrier.dims, N.carrier.dims, q.space.dims)
    return TensorOver(module, M, N, T, sub, q.projection, q.section)


def tensor_over_maps(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    A = _same_algebra(f.source, g.source, f.target, g.target)
    src = tensor_over(A, f.source, g.source)
    dst = tensor_over(A, f.target, g.target)
    m = compose(dst.projection, compose(tensor_maps(f.map, g.map), src.section))
    return ModuleMap(src.module, dst.module, m)


def _action_map(M: ModuleInC) -> GradedMap:
    """rho: A (x) M -> M as a plain graded map."""
    A = M.algebra
    T = tensor(A.carrier, M.carrier)
    entries = {(k, col): v for col, (a, x) in enumerate(T.pairs) for k, v in M.columns[a][x]}
    return GradedMap.from_matrix(T.space, M.carrier, linalg.sparse(entries, (M.carrier.total, T.space.total)))


def left_unitor(M: ModuleInC) -> ModuleMap:
    """A (x)_A M -> M induced by the action."""
    A = M.algebra
    t = tensor_over(A, regular_module(A), M)
    return ModuleMap(t.module, M, t.induced(_action_map(M)))


class BaseChange(NamedTuple):
    module: ModuleInC
    tensor: TensorOver
    unit: GradedMap


@functools.cache
def base_change(u: AlgebraMap, M: ModuleInC) -> BaseChange:
    """B (x)_A M with B acting on the left factor, and the unit m -> 1 (x) m."""
    A, B = u.source, u.target
    if M.algebra is not A:
        raise InputError("module does not live over the source of the algebra map")
    if A.cochain != B.cochain:
        raise InputError("algebras live in different categories")
    report = check_algebra_map(u)
    if not report.passed:
        raise InputError("not an algebra map", location=str(report.violations[0]))
    t = tensor_over(A, restrict_scalars(u, regular_module(B)), M)
    P, S = t.projection.matrix, t.section.matrix
    ops = tuple(linalg.chain(P, op, S) for op in _tensor_action(regular_module(B), t.product))
    module = ModuleInC(B, t.module.carrier, ops, f"{B.name}(x){M.name}")
    columns = [t.element(B.unit, M.carrier.basis_vector(m)) for m in range(M.carrier.total)]
    unit = GradedMap.from_matrix(M.carrier, module.carrier, linalg.from_columns(columns, module.carrier.total))
    return BaseChange(module, t, unit)


def base_change_map(u: AlgebraMap, f: ModuleMap) -> ModuleMap:
    src = base_change(u, f.source)
    dst = base_change(u, f.target)
    m = compose(
        dst.tensor.projection,
        compose(tensor_maps(identity_map(u.target.carrier), f.map), src.tensor.section),
    )
    return ModuleMap(src.module, dst.module, m)


def composite_base_change_iso(
    v: AlgebraMap, w: AlgebraMap, M: ModuleInC, wv: AlgebraMap | None = None
) -> ModuleMap:
    """w*(v* M) -> (w v)* M, d (x) [b (x) m] -> phi(|d|, |b|, |m|)^-1 [d w(b) (x) m]."""
    wv = wv or compose_algebra_maps(w, v)
    if not wv.map.equals(compose(w.map, v.map)):
        raise InputError("composite does not match the two algebra maps")
    inner = base_change(v, M)
    outer = base_change(w, inner.module)
    target = base_change(wv, M)
    B1, B2 = v.target, w.target
    phi = B2.phi
    T = outer.tensor.product
    columns = []
    for d, x in T.pairs:
        b, m = inner.tensor.section_pairs[x]
        c = 1 / phi.at(B2.carrier.degrees[d], B1.carrier.degrees[b], M.carrier.degrees[m])
        db = tuple(c * value for value in B2.multiply(B2.basis(d), w.apply(B1.basis(b))))
        columns.append(target.tensor.element(db, M.carrier.basis_vector(m)))
    g = GradedMap.from_matrix(T.space, target.module.carrier, linalg.from_columns(columns, target.module.carrier.total))
    f = factor_through_epi(outer.tensor.projection, g)
    if f is None:
        raise ArithmeticError("canonical base change comparison does not descend to the quotient")
    return ModuleMap(outer.module, target.module, f)


@dataclass(frozen=True, eq=False)
class InnerHom:
    """hom_A(M, N) inside the degree-shifted morphism data [M, N].

    A vector of [M, N] of degree g is a matrix sending x_i to the span of
    the target basis vectors of degree |x_i| + g.
    """

    module: ModuleInC
    source: ModuleInC
    target: ModuleInC
    space: GradedSpace
    slots: tuple[tuple[int, int], ...]
    equalizer: GradedSubspace

    @functools.cached_property
    def slot_index(self) -> dict[tuple[int, int], int]:
        return {slot: k for k, slot in enumerate(self.slots)}

    def to_matrix(self, coords: Sequence[Fraction]) -> DomainMatrix:
        """The morphism data of an element of the module carrier."""
        vector = self.equalizer.inclusion().apply(coords)
        entries = {(j, i): v for (i, j), v in zip(self.slots, vector) if v}
        return linalg.sparse(entries, (self.target.carrier.total, self.source.carrier.total))

    def from_matrix(self, m: DomainMatrix) -> Vector:
        data = linalg.entries(m)
        vector = [ZERO] * self.space.total
        for (i, j), k in self.slot_index.items():
            vector[k] = data[j][i]
        return self.equalizer.coordinates(vector)

    def global_sections(self) -> list[ModuleMap]:
        """Hom_A(M, N): the identity-degree part of the equalizer."""
        e = self.space.group.index(self.space.group.identity)
        n = self.module.carrier.total
        result = []
        for k in self.module.carrier.span(e):
            coords = tuple(ONE if i == k else ZERO for i in range(n))
            m = self.to_matrix(coords)
            result.append(ModuleMap(self.source, self.target, GradedMap.from_matrix(self.source.carrier, self.target.carrier, m)))
        return result

    @functools.cached_property
    def evaluation(self) -> GradedMap:
        """f (x) m -> f(m), from hom(M, N) (x) M to N."""
        T = tensor(self.module.carrier, self.source.carrier)
        mats = [linalg.entries(self.to_matrix(self.module.carrier.basis_vector(f))) for f in range(self.module.carrier.total)]
        entries = {}
        for col, (f, m) in enumerate(T.pairs):
            for r in range(self.target.carrier.total):
                if mats[f][r][m]:
                    entries[r, col] = mats[f][r][m]
        return GradedMap.from_matrix(T.space, self.target.carrier, linalg.sparse(entries, (self.target.carrier.total, T.space.total)))


@functools.cache
def inner_hom(A: AlgebraInC, M: ModuleInC, N: ModuleInC) -> InnerHom:
    """Equalizer of phi(g,x,z) f(rho(a, m)) and R(g,x) phi(x,g,z) rho(a, f(m)); a.f = phi(x,g,z) rho(a, f(-))."""
    if M.algebra is not A or N.algebra is not A:
        raise InputError("modules over a different algebra")
    group = A.group
    s = group.sum_table
    phi, R = A.phi, A.ratio
    adeg, mdeg, ndeg = A.carrier.degrees, M.carrier.degrees, N.carrier.degrees
    slots, dims = [], []
    for g in range(group.size):
        before = len(slots)
        for i in range(M.carrier.total):
            for j in N.carrier.span(s[mdeg[i]][g]):
                slots.append((i, j))
        dims.append(len(slots) - before)
    space = GradedSpace(group, tuple(dims))
    index = {slot: k for k, slot in enumerate(slots)}
    rows_by_degree = []
    for g in range(group.size):
        offset = space.offsets[g]
        rows = []
        for p in range(A.dimension):
            x = adeg[p]
            for c in range(M.carrier.total):
                z = mdeg[c]
                left, right = phi.at(g, x, z), R.at(g, x) * phi.at(x, g, z)
                eq = defaultdict(lambda: defaultdict(Fraction))
                for k, v in M.columns[p][c]:
                    for r in N.carrier.span(s[mdeg[k]][g]):
                        eq[r][index[k, r] - offset] += left * v
                for k in N.carrier.span(s[z][g]):
                    for r, v in N.columns[p][k]:
                        eq[r][index[c, k] - offset] -= right * v
                rows.extend({var: val for var, val in row.items() if val} for row in eq.values())
        system = _sparse_system([row for row in rows if row], dims[g])
        rows_by_degree.append(tuple(tuple(r) for r in linalg.row_space(linalg.nullspace(system), dims[g])))
    equalizer = GradedSubspace(space, tuple(rows_by_degree))
    hom = InnerHom(None, M, N, space, tuple(slots), equalizer)
    basis = [hom.to_matrix(equalizer.space.basis_vector(k)) for k in range(equalizer.dimension)]
    edeg = equalizer.space.degrees
    n = equalizer.dimension
    ops = []
    for p in range(A.dimension):
        x = adeg[p]
        columns = []
        for k, F in enumerate(basis):
            g = edeg[k]
            twist = linalg.diagonal([phi.at(x, g, mdeg[c]) for c in range(M.carrier.total)])
            columns.append(hom.from_matrix(linalg.chain(N.action[p], F, twist)))
        ops.append(linalg.from_columns(columns, n))
    module = ModuleInC(A, equalizer.space, tuple(ops), f"hom({M.name},{N.name})")
    logger.debug("inner hom: dims %s", equalizer.dims)
    return InnerHom(module, M, N, space, tuple(slots), equalizer)


def _interchange(phi, R, y: int, g: int, y2: int, z: int) -> Fraction:
    """Scalar of (b (x) c) (x) (b' (x) c') -> (b (x) b') (x) (c (x) c')."""
    s = phi.group.sum_table
    return (
        phi.at(y, g, s[y2][z])
        / phi.at(g, y2, z)
        * R.at(g, y2)
        * phi.at(y2, g, z)
        / phi.at(y, y2, s[g][z])
    )


def zeta_map(u: AlgebraMap, M: ModuleInC, N: ModuleInC) -> tuple[ModuleMap, bool]:
    """B (x)_A hom_A(M, N) -> hom_B(B (x)_A M, B (x)_A N) and whether it is invertible.

    b (x) f is sent to b' (x) m -> c m(b, b') (x) f(m).
    """
    A, B = u.source, u.target
    H = inner_hom(A, M, N)
    left = base_change(u, H.module)
    BM, BN = base_change(u, M), base_change(u, N)
    right = inner_hom(B, BM.module, BN.module)
    phi, R = B.phi, B.ratio
    bdeg, mdeg = B.carrier.degrees, M.carrier.degrees
    hdeg = H.module.carrier.degrees
    hom_mats = [linalg.entries(H.to_matrix(H.module.carrier.basis_vector(f))) for f in range(H.module.carrier.total)]
    columns = []
    for b, f in left.tensor.section_pairs:
        F = hom_mats[f]
        image_cols = []
        for b2, m in BM.tensor.section_pairs:
            c = _interchange(phi, R, bdeg[b], hdeg[f], bdeg[b2], mdeg[m])
            fm = [F[r][m] for r in range(N.carrier.total)]
            bb = tuple(c * v for v in B.product(b, b2))
            image_cols.append(BN.tensor.element(bb, fm))
        Z = linalg.from_columns(image_cols, BN.module.carrier.total)
        columns.append(right.from_matrix(Z))
    m = linalg.from_columns(columns, right.module.carrier.total)
    zeta = ModuleMap(left.module, right.module, GradedMap.from_matrix(left.module.carrier, right.module.carrier, m))
    verdict = is_invertible(zeta.map)
    logger.debug("zeta: %s -> %s invertible=%s", left.module.carrier.dims, right.module.carrier.dims, verdict)
    return zeta, verdict


def o_module_from_degree_zero(
    d: int, isos: Mapping[tuple[int, ...], Sequence[Sequence]], A: AlgebraInC | None = None
) -> ModuleInC:
    """The module with degree-e part Q^d whose e_g-multiplications are the given isomorphisms."""
    A = A or octonions()
    if any(dim != 1 for dim in A.carrier.dims):
        raise InputError("needs an algebra with one basis vector per degree")
    if d < 0:
        raise InputError("dimension must be nonnegative")
    group = A.group
    e = A.identity_degree
    psi, psi_inv = {}, {}
    for g, element in enumerate(group.elements):
        if g == e:
            psi[g] = linalg.identity(d)
        else:
            if element not in isos and d:
                raise InputError("missing isomorphism", location=f"iso {list(element)}")
            psi[g] = linalg.matrix(isos.get(element, []), (d, d))
        psi_inv[g] = linalg.inverse(psi[g])
        if psi_inv[g] is None:
            raise InputError("supplied matrix is not invertible", location=f"iso {list(element)}")
    carrier = GradedSpace(group, tuple(d for _ in range(group.size)))
    s = group.sum_table
    n = carrier.total
    ops = []
    for h in range(group.size):
        entries = {}
        for g in range(group.size):
            hg = s[h][g]
            c = A.product(h, g)[hg]
            block = linalg.entries(linalg.scale(linalg.mul(psi[hg], psi_inv[g]), c))
            for i, row in enumerate(block):
                for j, v in enumerate(row):
                    if v:
                        entries[carrier.offsets[hg] + i, carrier.offsets[g] + j] = v
        ops.append(linalg.sparse(entries, (n, n)))
    return ModuleInC(A, carrier, tuple(ops), f"O[{d}]")


def degree_zero_data(M: ModuleInC) -> tuple[int, dict[tuple[int, ...], list[list[Fraction]]]]:
    """(d, isos) with isos[g] the block of rho(e_g, -) from degree e to degree g."""
    A = M.algebra
    if any(dim != 1 for dim in A.carrier.dims):
        raise InputError("needs an algebra with one basis vector per degree")
    e = A.identity_degree
    d = M.carrier.dims[e]
    isos = {}
    for g, element in enumerate(A.group.elements):
        if g == e:
            continue
        data = linalg.entries(M.action[g])
        isos[element] = [[data[r][c] for c in M.carrier.span(e)] for r in M.carrier.span(g)]
    return d, isos


def v0_conservative_check(f: ModuleMap) -> CheckReport:
    """V0(f) invertible implies f invertible, with every block rebuilt from the e-block."""
    A = _same_algebra(f.source, f.target)
    report = CheckReport("v0_conservative")
    e = A.identity_degree
    v0 = f.map.blocks[e]
    v0_invertible = linalg.rank(v0) == v0.shape[0] == v0.shape[1]
    invertible = is_invertible(f.map)
    _, src = degree_zero_data(f.source)
    _, dst = degree_zero_data(f.target)
    for g, element in enumerate(A.group.elements):
        if g == e:
            continue
        report.checked += 1
        d_src, d_dst = f.source.carrier.dims[e], f.target.carrier.dims[e]
        psi_src = linalg.matrix(src[element], (d_src, d_src))
        psi_dst = linalg.matrix(dst[element], (d_dst, d_dst))
        inv = linalg.inverse(psi_src)
        if inv is None or not linalg.equal(linalg.chain(psi_dst, v0, inv), f.map.blocks[g]):
            report.fail({"degree": list(element), "reason": "block not conjugate to the identity-degree block"})
    report.checked += 1
    if v0_invertible and not invertible:
        report.fail({"reason": "V0(f) invertible but f is not"})
    report.details = {"v0_invertible": v0_invertible, "invertible": invertible}
    return report


def _lift_exists(epi: ModuleMap, f: ModuleMap) -> bool:
    """Is there g: A -> M with epi g = f (f: A -> N)?"""
    candidates = hom_basis(f.source, epi.source)
    target = [v for row in linalg.entries(f.map.matrix) for v in row]
    columns = [[v for row in linalg.entries(linalg.mul(epi.map.matrix, g.map.matrix)) for v in row] for g in candidates]
    return linalg.solve(linalg.from_columns(columns, len(target)), linalg.column(target)) is not None


def generator_check(
    A: AlgebraInC,
    epis: Sequence[ModuleMap] | None = None,
    pairs: Sequence[tuple[ModuleMap, ModuleMap]] | None = None,
) -> CheckReport:
    """Projectivity and generator instances for Hom_A(A, -)."""
    reg = regular_module(A)
    if epis is None:
        two = free_rank(A, 2)
        summed = combine_module_maps([two.projections[0], two.projections[1]], [ONE, ONE])
        epis = [summed, identity_module_map(reg)]
    if pairs is None:
        identity = identity_module_map(reg)
        pairs = [(identity, combine_module_maps([identity], [Fraction(2)]))]
    report = CheckReport("generator")
    for k, epi in enumerate(epis):
        if not linalg.rank(epi.map.matrix) == epi.target.carrier.total:
            raise InputError("battery map is not an epimorphism", location=f"epis[{k}]")
        for f in hom_basis(reg, epi.target):
            report.checked += 1
            if not _lift_exists(epi, f):
                report.fail({"epi": k, "reason": "no lift through the epimorphism"})
    for k, (f, g) in enumerate(pairs):
        report.checked += 1
        separated = any(
            not compose(f.map, h.map).equals(compose(g.map, h.map)) for h in hom_basis(reg, f.source)
        )
        if f.map.equals(g.map) == separated:
            report.fail({"pair": k, "reason": "Hom_A(A, -) does not separate distinct maps"})
    report.details = {"finitely_presented": True, "dimension": A.dimension}
    return report


class AlgebraTensor(NamedTuple):
    algebra: AlgebraInC
    left: AlgebraMap
    right: AlgebraMap
    tensor: TensorOver


def tensor_algebras_over(A: AlgebraInC, u: AlgebraMap, v: AlgebraMap) -> AlgebraTensor:
    """B (x)_A C with (b (x) c)(b' (x) c') = interchange * m(b, b') (x) m(c, c')."""
    B, C = u.target, v.target
    if u.source is not A or v.source is not A:
        raise InputError("algebra maps must start at the base algebra")
    t = tensor_over(A, restrict_scalars(u, regular_module(B)), restrict_scalars(v, regular_module(C)))
    phi, R = A.phi, A.ratio
    bdeg, cdeg = B.carrier.degrees, C.carrier.degrees
    lifts = t.section_pairs
    n = len(lifts)
    products = {}
    for i, j in itertools.product(range(n), repeat=2):
        (b, c), (b2, c2) = lifts[i], lifts[j]
        scalar = _interchange(phi, R, bdeg[b], cdeg[c], bdeg[b2], cdeg[c2])
        bb = tuple(scalar * w for w in B.product(b, b2))
        products[i, j] = t.element(bb, C.product(c, c2))
    D = algebra_from_structure(A.cochain, t.module.carrier, products, t.element(B.unit, C.unit), f"{B.name}(x){C.name}")
    left_cols = [t.element(B.basis(b), C.unit) for b in range(B.dimension)]
    right_cols = [t.element(B.unit, C.basis(c)) for c in range(C.dimension)]
    left = AlgebraMap(B, D, GradedMap.from_matrix(B.carrier, D.carrier, linalg.from_columns(left_cols, n)), "overlap_leg")
    right = AlgebraMap(C, D, GradedMap.from_matrix(C.carrier, D.carrier, linalg.from_columns(right_cols, n)), "overlap_leg")
    return AlgebraTensor(D, left, right, t)


def factor_through_epi(epi: GradedMap, f: GradedMap) -> GradedMap | None:
    """The unique g with g epi = f, or None."""
    if epi.source != f.source:
        raise InputError("maps do not share a source")
    blocks = []
    for p, block in zip(epi.blocks, f.blocks):
        solution = linalg.solve(linalg.transpose(p), linalg.transpose(block))
        if solution is None:
            return None
        blocks.append(linalg.transpose(solution))
    g = GradedMap(epi.target, f.target, tuple(blocks))
    return g if compose(g, epi).equals(f) else None
