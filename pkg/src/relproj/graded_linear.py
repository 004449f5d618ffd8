"""Graded vector spaces over Q and degree-preserving maps between them.

Bases are flat: components in group-element order, slots within a
component. Tensor products list their basis lexicographically in
(left degree, left slot, right slot).
"""
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from sympy.polys.matrices import DomainMatrix

from relproj import linalg
from relproj.cochain_core import Cochain2, GradingGroup, Scalar3
from relproj.errors import InputError
from relproj.report import CheckReport

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class GradedSpace:
    group: GradingGroup
    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) != self.group.size or any(d < 0 for d in self.dims):
            raise InputError(f"dims must list {self.group.size} nonnegative integers")

    @functools.cached_property
    def offsets(self) -> tuple[int, ...]:
        result, running = [], 0
        for d in self.dims:
            result.append(running)
            running += d
        return tuple(result)

    @property
    def total(self) -> int:
        return sum(self.dims)

    @functools.cached_property
    def degrees(self) -> tuple[int, ...]:
        """Degree index of every flat basis position."""
        return tuple(g for g, d in enumerate(self.dims) for _ in range(d))

    def span(self, g: int) -> range:
        return range(self.offsets[g], self.offsets[g] + self.dims[g])

    def is_zero(self) -> bool:
        return self.total == 0

    def component(self, vector: Sequence[Fraction], g: int) -> list[Fraction]:
        return list(vector[self.offsets[g] : self.offsets[g] + self.dims[g]])

    def basis_vector(self, k: int) -> tuple[Fraction, ...]:
        return tuple(ONE if i == k else ZERO for i in range(self.total))


def unit_object(group: GradingGroup) -> GradedSpace:
    e = group.index(group.identity)
    return GradedSpace(group, tuple(1 if g == e else 0 for g in range(group.size)))


def zero_object(group: GradingGroup) -> GradedSpace:
    return GradedSpace(group, tuple(0 for _ in range(group.size)))


def concentrated(group: GradingGroup, degree: Sequence[int], dim: int) -> GradedSpace:
    g = group.index(degree)
    return GradedSpace(group, tuple(dim if h == g else 0 for h in range(group.size)))


def _same_group(*spaces: GradedSpace) -> GradingGroup:
    group = spaces[0].group
    if any(s.group != group for s in spaces):
        raise InputError("graded spaces over different grading groups")
    return group


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedSpace
    target: GradedSpace
    blocks: tuple[DomainMatrix, ...]

    def __post_init__(self):
        _same_group(self.source, self.target)
        for g, block in enumerate(self.blocks):
            if block.shape != (self.target.dims[g], self.source.dims[g]):
                raise InputError(f"block {g} has shape {block.shape}")

    @classmethod
    def from_matrix(cls, source: GradedSpace, target: GradedSpace, m: DomainMatrix) -> "GradedMap":
        if m.shape != (target.total, source.total):
            raise InputError(f"matrix shape {m.shape} does not match {target.total} x {source.total}")
        data = linalg.entries(m)
        for r, row in enumerate(data):
            for c, value in enumerate(row):
                if value and target.degrees[r] != source.degrees[c]:
                    raise InputError("map is not degree-preserving", location=f"entry ({r}, {c})")
        blocks = tuple(
            linalg.matrix(
                [[data[r][c] for c in source.span(g)] for r in target.span(g)],
                (target.dims[g], source.dims[g]),
            )
            for g in range(source.group.size)
        )
        return cls(source, target, blocks)

    @functools.cached_property
    def matrix(self) -> DomainMatrix:
        entries = {}
        for g, block in enumerate(self.blocks):
            r0, c0 = self.target.offsets[g], self.source.offsets[g]
            for i, row in enumerate(linalg.entries(block)):
                for j, value in enumerate(row):
                    if value:
                        entries[r0 + i, c0 + j] = value
        return linalg.sparse(entries, (self.target.total, self.source.total))

    def apply(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return linalg.flat(linalg.mul(self.matrix, linalg.column(vector)))

    def equals(self, other: "GradedMap") -> bool:
        return (
            self.source == other.source
            and self.target == other.target
            and all(linalg.equal(a, b) for a, b in zip(self.blocks, other.blocks))
        )

    def is_zero(self) -> bool:
        return all(linalg.is_zero(b) for b in self.blocks)


def identity_map(X: GradedSpace) -> GradedMap:
    return GradedMap(X, X, tuple(linalg.identity(d) for d in X.dims))


def zero_map(X: GradedSpace, Y: GradedSpace) -> GradedMap:
    return GradedMap(X, Y, tuple(linalg.zeros(b, a) for a, b in zip(X.dims, Y.dims)))


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f."""
    if f.target != g.source:
        raise InputError("maps are not composable")
    return GradedMap(f.source, g.target, tuple(linalg.mul(b, a) for b, a in zip(g.blocks, f.blocks)))


def add_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    if f.source != g.source or f.target != g.target:
        raise InputError("maps have different shapes")
    return GradedMap(f.source, f.target, tuple(linalg.add(a, b) for a, b in zip(f.blocks, g.blocks)))


def scale_map(f: GradedMap, c) -> GradedMap:
    return GradedMap(f.source, f.target, tuple(linalg.scale(b, c) for b in f.blocks))


def inverse_map(f: GradedMap) -> GradedMap | None:
    blocks = []
    for block in f.blocks:
        inv = linalg.inverse(block)
        if inv is None:
            return None
        blocks.append(inv)
    return GradedMap(f.target, f.source, tuple(blocks))


def is_invertible(f: GradedMap) -> bool:
    return f.source.dims == f.target.dims and all(
        linalg.rank(b) == b.shape[0] for b in f.blocks
    )


def is_mono(f: GradedMap) -> bool:
    return all(linalg.rank(b) == b.shape[1] for b in f.blocks)


def is_epi(f: GradedMap) -> bool:
    return all(linalg.rank(b) == b.shape[0] for b in f.blocks)


@dataclass(frozen=True)
class GradedSubspace:
    """A graded subspace held as canonical echelon rows, one tuple per degree."""

    ambient: GradedSpace
    rows: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @classmethod
    def from_vectors(cls, ambient: GradedSpace, vectors: Sequence[Sequence[Fraction]]) -> "GradedSubspace":
        """Smallest graded subspace containing every homogeneous part of ``vectors``."""
        rows = []
        for g in range(ambient.group.size):
            parts = [ambient.component(v, g) for v in vectors]
            basis = linalg.row_space([p for p in parts if any(p)], ambient.dims[g])
            rows.append(tuple(tuple(r) for r in basis))
        return cls(ambient, tuple(rows))

    @classmethod
    def whole(cls, ambient: GradedSpace) -> "GradedSubspace":
        return cls.from_vectors(ambient, [ambient.basis_vector(k) for k in range(ambient.total)])

    @classmethod
    def zero(cls, ambient: GradedSpace) -> "GradedSubspace":
        return cls(ambient, tuple(() for _ in ambient.dims))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    @functools.cached_property
    def space(self) -> GradedSpace:
        return GradedSpace(self.ambient.group, self.dims)

    def vectors(self) -> list[tuple[Fraction, ...]]:
        """Basis as full ambient vectors, in degree order."""
        result = []
        for g, rows in enumerate(self.rows):
            for row in rows:
                v = [ZERO] * self.ambient.total
                v[self.ambient.offsets[g] : self.ambient.offsets[g] + len(row)] = row
                result.append(tuple(v))
        return result

    def inclusion(self) -> GradedMap:
        blocks = tuple(
            linalg.from_columns([list(r) for r in rows], self.ambient.dims[g])
            for g, rows in enumerate(self.rows)
        )
        return GradedMap(self.space, self.ambient, blocks)

    def contains(self, other: "GradedSubspace") -> bool:
        return self.plus(other) == self

    def contains_vector(self, vector: Sequence[Fraction]) -> bool:
        return self.plus(GradedSubspace.from_vectors(self.ambient, [vector])) == self

    def coordinates(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Coordinates in the echelon basis; InputError if the vector lies outside."""
        result = []
        for g, rows in enumerate(self.rows):
            part = self.ambient.component(vector, g)
            coords = [part[next(i for i, v in enumerate(row) if v)] for row in rows]
            rebuilt = [sum((c * row[i] for c, row in zip(coords, rows)), ZERO) for i in range(len(part))]
            if rebuilt != part:
                raise InputError("vector is not in the subspace", location=f"degree {g}")
            result.extend(coords)
        return tuple(result)

    def plus(self, other: "GradedSubspace") -> "GradedSubspace":
        return GradedSubspace.from_vectors(self.ambient, self.vectors() + other.vectors())

    def is_whole(self) -> bool:
        return self.dims == self.ambient.dims

    def is_zero(self) -> bool:
        return self.dimension == 0

    def sort_key(self) -> tuple:
        return self.rows


class Quotient(NamedTuple):
    space: GradedSpace
    projection: GradedMap
    section: GradedMap


def quotient_by(sub: GradedSubspace) -> Quotient:
    ambient = sub.ambient
    projections, sections = [], []
    for g, rows in enumerate(sub.rows):
        p, s = linalg.complement_projection(rows, ambient.dims[g])
        projections.append(p)
        sections.append(s)
    space = GradedSpace(ambient.group, tuple(p.shape[0] for p in projections))
    return Quotient(
        space,
        GradedMap(ambient, space, tuple(projections)),
        GradedMap(space, ambient, tuple(sections)),
    )


def image_subspace(f: GradedMap) -> GradedSubspace:
    rows = tuple(
        tuple(tuple(r) for r in linalg.column_space(block)) for block in f.blocks
    )
    return GradedSubspace(f.target, rows)


def kernel_subspace(f: GradedMap) -> GradedSubspace:
    rows = tuple(
        tuple(tuple(r) for r in linalg.row_space(linalg.nullspace(block), block.shape[1]))
        for block in f.blocks
    )
    return GradedSubspace(f.source, rows)


def kernel(f: GradedMap) -> tuple[GradedSpace, GradedMap]:
    sub = kernel_subspace(f)
    return sub.space, sub.inclusion()


def cokernel(f: GradedMap) -> tuple[GradedSpace, GradedMap]:
    q = quotient_by(image_subspace(f))
    return q.space, q.projection


def image(f: GradedMap) -> tuple[GradedSpace, GradedMap, GradedMap]:
    """(I, mono, epi) with f = mono . epi."""
    sub = image_subspace(f)
    mono = sub.inclusion()
    epi_blocks = []
    for m_block, f_block in zip(mono.blocks, f.blocks):
        epi_blocks.append(linalg.solve(m_block, f_block))
    return sub.space, mono, GradedMap(f.source, sub.space, tuple(epi_blocks))


class DirectSum(NamedTuple):
    space: GradedSpace
    injections: tuple[GradedMap, ...]
    projections: tuple[GradedMap, ...]


def direct_sum(spaces: Sequence[GradedSpace], group: GradingGroup | None = None) -> DirectSum:
    """Components of each degree are stacked summand by summand."""
    if not spaces:
        if group is None:
            raise InputError("empty direct sum needs a grading group")
        return DirectSum(zero_object(group), (), ())
    group = _same_group(*spaces)
    total = GradedSpace(group, tuple(sum(s.dims[g] for s in spaces) for g in range(group.size)))
    injections, projections = [], []
    for k, s in enumerate(spaces):
        blocks = []
        for g in range(group.size):
            before = sum(t.dims[g] for t in spaces[:k])
            blocks.append(
                linalg.sparse(
                    {(before + i, i): ONE for i in range(s.dims[g])}, (total.dims[g], s.dims[g])
                )
            )
        inj = GradedMap(s, total, tuple(blocks))
        injections.append(inj)
        projections.append(
            GradedMap(total, s, tuple(linalg.transpose(b) for b in blocks))
        )
    return DirectSum(total, tuple(injections), tuple(projections))


def block_map(maps: Sequence[GradedMap], source: DirectSum, target: DirectSum) -> GradedMap:
    """The diagonal map (+)f_k between direct sums."""
    result = zero_map(source.space, target.space)
    for f, inj, proj in zip(maps, target.injections, source.projections):
        result = add_maps(result, compose(inj, compose(f, proj)))
    return result


@dataclass(frozen=True)
class TensorProduct:
    space: GradedSpace
    left: GradedSpace
    right: GradedSpace
    pairs: tuple[tuple[int, int], ...]

    @functools.cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {pair: k for k, pair in enumerate(self.pairs)}


@functools.cache
def tensor(X: GradedSpace, Y: GradedSpace) -> TensorProduct:
    group = _same_group(X, Y)
    n = group.size
    s = group.sum_table
    pairs = []
    dims = []
    for g in range(n):
        count = 0
        for a in range(n):
            b = next(b for b in range(n) if s[a][b] == g)
            for i in X.span(a):
                for j in Y.span(b):
                    pairs.append((i, j))
                    count += 1
        dims.append(count)
    return TensorProduct(GradedSpace(group, tuple(dims)), X, Y, tuple(pairs))


def tensor_vector(T: TensorProduct, x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple[Fraction, ...]:
    result = [ZERO] * T.space.total
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    result[T.index[i, j]] += xi * yj
    return tuple(result)


def tensor_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    src = tensor(f.source, g.source)
    dst = tensor(f.target, g.target)
    fm, gm = linalg.entries(f.matrix), linalg.entries(g.matrix)
    entries = {}
    for p, (i, j) in enumerate(src.pairs):
        for i2 in range(f.target.total):
            if not fm[i2][i]:
                continue
            for j2 in range(g.target.total):
                if gm[j2][j]:
                    entries[dst.index[i2, j2], p] = fm[i2][i] * gm[j2][j]
    return GradedMap.from_matrix(
        src.space, dst.space, linalg.sparse(entries, (dst.space.total, src.space.total))
    )


def _permutation_map(source: GradedSpace, target: GradedSpace, moves) -> GradedMap:
    entries = {(t, p): c for p, t, c in moves}
    return GradedMap.from_matrix(source, target, linalg.sparse(entries, (target.total, source.total)))


def associator_map(X: GradedSpace, Y: GradedSpace, Z: GradedSpace, phi: Scalar3) -> GradedMap:
    """(X (x) Y) (x) Z -> X (x) (Y (x) Z), scaling by phi of the degrees."""
    xy = tensor(X, Y)
    xy_z = tensor(xy.space, Z)
    yz = tensor(Y, Z)
    x_yz = tensor(X, yz.space)
    moves = []
    for p, (q, k) in enumerate(xy_z.pairs):
        i, j = xy.pairs[q]
        t = x_yz.index[i, yz.index[j, k]]
        moves.append((p, t, phi.at(X.degrees[i], Y.degrees[j], Z.degrees[k])))
    return _permutation_map(xy_z.space, x_yz.space, moves)


def symmetry_map(X: GradedSpace, Y: GradedSpace, ratio: Cochain2) -> GradedMap:
    """x (x) y -> R(|x|, |y|) y (x) x."""
    xy = tensor(X, Y)
    yx = tensor(Y, X)
    moves = [
        (p, yx.index[j, i], ratio.at(X.degrees[i], Y.degrees[j])) for p, (i, j) in enumerate(xy.pairs)
    ]
    return _permutation_map(xy.space, yx.space, moves)


def unitor_maps(X: GradedSpace) -> tuple[GradedMap, GradedMap]:
    """(1 (x) X -> X, X (x) 1 -> X)."""
    one = unit_object(X.group)
    left = tensor(one, X)
    right = tensor(X, one)
    lam = _permutation_map(left.space, X, [(p, j, ONE) for p, (_, j) in enumerate(left.pairs)])
    rho = _permutation_map(right.space, X, [(p, i, ONE) for p, (i, _) in enumerate(right.pairs)])
    return lam, rho


def check_pentagon_maps(
    W: GradedSpace, X: GradedSpace, Y: GradedSpace, Z: GradedSpace, phi: Scalar3
) -> bool:
    """Both routes ((WX)Y)Z -> W(X(YZ)) agree as matrices."""
    wx = tensor(W, X).space
    yz = tensor(Y, Z).space
    xy = tensor(X, Y).space
    route1 = compose(associator_map(W, X, yz, phi), associator_map(wx, Y, Z, phi))
    route2 = compose(
        tensor_maps(identity_map(W), associator_map(X, Y, Z, phi)),
        compose(
            associator_map(W, xy, Z, phi),
            tensor_maps(associator_map(W, X, Y, phi), identity_map(Z)),
        ),
    )
    return route1.equals(route2)


def check_hexagon_maps(
    X: GradedSpace, Y: GradedSpace, Z: GradedSpace, phi: Scalar3, ratio: Cochain2
) -> bool:
    """Both routes (XY)Z -> Y(ZX) agree as matrices."""
    yz = tensor(Y, Z).space
    route1 = compose(
        associator_map(Y, Z, X, phi),
        compose(symmetry_map(X, yz, ratio), associator_map(X, Y, Z, phi)),
    )
    route2 = compose(
        tensor_maps(identity_map(Y), symmetry_map(X, Z, ratio)),
        compose(
            associator_map(Y, X, Z, phi),
            tensor_maps(symmetry_map(X, Y, ratio), identity_map(Z)),
        ),
    )
    return route1.equals(route2)


def coherence_spot_check(phi: Scalar3, ratio: Cochain2) -> CheckReport:
    """Hexagon and pentagon as composed maps on triples of 1-dimensional spaces.

    The pentagon's outermost factor is pinned to the last group element.
    """
    group = phi.group
    lines = [concentrated(group, g, 1) for g in group.elements]
    W = lines[-1]
    report = CheckReport("coherence_maps")

    def label(*spaces):
        return [list(group.elements[s.degrees[0]]) for s in spaces]

    for X in lines:
        for Y in lines:
            for Z in lines:
                report.checked += 1
                if not check_hexagon_maps(X, Y, Z, phi, ratio):
                    report.fail({"hexagon": label(X, Y, Z)})
                if not check_pentagon_maps(W, X, Y, Z, phi):
                    report.fail({"pentagon": label(W, X, Y, Z)})
    return report
