"""Grading groups, 2-cochains and the scalar monoidal data they induce."""
import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from helpers.logging import logger
from relproj.errors import InputError
from relproj.report import CheckReport

Element = tuple[int, ...]

ONE = Fraction(1)


@dataclass(frozen=True)
class GradingGroup:
    """Z_{m1} x ... x Z_{mk}; elements are residue vectors in lexicographic order."""

    orders: tuple[int, ...]

    def __post_init__(self):
        if any(not isinstance(m, int) or m < 1 for m in self.orders):
            raise InputError(f"group orders must be positive integers, got {self.orders}")

    @functools.cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(m) for m in self.orders)))

    @functools.cached_property
    def _positions(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @functools.cached_property
    def sum_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.index(self.add(x, y)) for y in self.elements) for x in self.elements
        )

    @functools.cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(self.index(self.neg(x)) for x in self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Element:
        return tuple(0 for _ in self.orders)

    def index(self, x: Sequence[int]) -> int:
        key = self.element(x)
        return self._positions[key]

    def element(self, x: Sequence[int]) -> Element:
        x = tuple(x)
        if len(x) != len(self.orders) or any(
            not isinstance(v, int) or not 0 <= v < m for v, m in zip(x, self.orders)
        ):
            raise InputError(f"{list(x)} is not an element of Z{list(self.orders)}")
        return x

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % m for a, m in zip(x, self.orders))


def z2_cubed() -> GradingGroup:
    return GradingGroup((2, 2, 2))


@dataclass(frozen=True)
class Cochain2:
    """A total map G x G -> nonzero rationals, stored by element index.

    ``parity`` optionally names a homomorphism G -> Z2 (one bit per element);
    the braiding then carries the extra sign (-1)^(p(x) p(y)).
    """

    group: GradingGroup
    table: tuple[tuple[Fraction, ...], ...]
    parity: tuple[int, ...] = ()

    def __post_init__(self):
        n = self.group.size
        if self.parity:
            s = self.group.sum_table
            if len(self.parity) != n or any(
                self.parity[s[x][y]] != (self.parity[x] + self.parity[y]) % 2
                for x in range(n)
                for y in range(n)
            ):
                raise InputError("parity must be a homomorphism onto Z2")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise InputError(f"cochain table must be {n} x {n}")
        for i, row in enumerate(self.table):
            for j, value in enumerate(row):
                if value == 0:
                    x, y = self.group.elements[i], self.group.elements[j]
                    raise InputError(
                        "cochain entries must be nonzero", location=f"F({list(x)}, {list(y)})"
                    )

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        return self.table[self.group.index(x)][self.group.index(y)]

    def at(self, i: int, j: int) -> Fraction:
        return self.table[i][j]


@dataclass(frozen=True)
class Scalar3:
    """A total map G x G x G -> nonzero rationals; the associator scalars."""

    group: GradingGroup
    table: tuple[Fraction, ...]

    def __call__(self, x: Sequence[int], y: Sequence[int], z: Sequence[int]) -> Fraction:
        g = self.group
        return self.at(g.index(x), g.index(y), g.index(z))

    def at(self, i: int, j: int, k: int) -> Fraction:
        n = self.group.size
        return self.table[(i * n + j) * n + k]

    def perturbed(self, x: Sequence[int], y: Sequence[int], z: Sequence[int], value) -> "Scalar3":
        g = self.group
        n = g.size
        position = (g.index(x) * n + g.index(y)) * n + g.index(z)
        table = list(self.table)
        table[position] = Fraction(value)
        return Scalar3(g, tuple(table))


def _bits(x: Sequence[int], name: str) -> tuple[int, int, int]:
    x = tuple(x)
    if len(x) != 3 or any(v not in (0, 1) for v in x):
        raise InputError(f"{name} must be a length-3 bit vector, got {list(x)}")
    return x


def eval_f(x: Sequence[int], y: Sequence[int]) -> int:
    """The octonion exponent f(x, y) mod 2 (bit positions 1..3 map to 0..2)."""
    x1, x2, x3 = _bits(x, "x")
    y1, y2, y3 = _bits(y, "y")
    quadratic = sum(x[i] * y[j] for i in range(3) for j in range(i, 3))
    cubic = y1 * x2 * x3 + x1 * y2 * x3 + x1 * y2 * y3
    return (quadratic + cubic) % 2


def octonion_cochain() -> Cochain2:
    group = z2_cubed()
    table = tuple(
        tuple(Fraction((-1) ** eval_f(x, y)) for y in group.elements) for x in group.elements
    )
    return Cochain2(group, table)


def trivial_cochain(group: GradingGroup) -> Cochain2:
    n = group.size
    return Cochain2(group, tuple(tuple(ONE for _ in range(n)) for _ in range(n)))


def super_cochain() -> Cochain2:
    """Z2 with F(1, 1) = -1: the symmetry of super vector spaces."""
    group = GradingGroup((2,))
    return Cochain2(group, ((ONE, ONE), (ONE, -ONE)), parity=(0, 1))


def cochain_from_entries(
    group: GradingGroup, entries: Iterable[tuple[Sequence[int], Sequence[int], Fraction]]
) -> Cochain2:
    n = group.size
    table = [[ONE] * n for _ in range(n)]
    for x, y, value in entries:
        table[group.index(x)][group.index(y)] = Fraction(value)
    return Cochain2(group, tuple(tuple(row) for row in table))


def check_normalized(F: Cochain2) -> CheckReport:
    g = F.group
    e = g.index(g.identity)
    report = CheckReport("normalized")
    for i, x in enumerate(g.elements):
        report.checked += 2
        if F.at(e, i) != ONE:
            report.fail({"pair": [list(g.identity), list(x)], "value": F.at(e, i)})
        if F.at(i, e) != ONE:
            report.fail({"pair": [list(x), list(g.identity)], "value": F.at(i, e)})
    return report


@functools.cache
def coboundary3(F: Cochain2) -> Scalar3:
    """phi(x, y, z) = F(x, y) F(x+y, z) / (F(y, z) F(x, y+z))."""
    g = F.group
    n = g.size
    s = g.sum_table
    table = [
        F.at(x, y) * F.at(s[x][y], z) / (F.at(y, z) * F.at(x, s[y][z]))
        for x in range(n)
        for y in range(n)
        for z in range(n)
    ]
    return Scalar3(g, tuple(table))


@functools.cache
def symmetry_ratio(F: Cochain2) -> Cochain2:
    """R(x, y) = F(x, y) / F(y, x)."""
    n = F.group.size
    table = tuple(tuple(F.at(x, y) / F.at(y, x) for y in range(n)) for x in range(n))
    return Cochain2(F.group, table)


@functools.cache
def braiding(F: Cochain2) -> Cochain2:
    """The symmetry scalars: R(x, y), signed by the parity when there is one."""
    if not F.parity:
        return symmetry_ratio(F)
    R = symmetry_ratio(F)
    n = F.group.size
    p = F.parity
    table = tuple(
        tuple(R.at(x, y) * (-1 if p[x] and p[y] else 1) for y in range(n)) for x in range(n)
    )
    return Cochain2(F.group, table)


def check_pentagon(phi: Scalar3) -> CheckReport:
    g = phi.group
    n = g.size
    s = g.sum_table
    report = CheckReport("pentagon")
    for x, y, z, w in itertools.product(range(n), repeat=4):
        report.checked += 1
        left = phi.at(y, z, w) * phi.at(x, s[y][z], w) * phi.at(x, y, z)
        right = phi.at(s[x][y], z, w) * phi.at(x, y, s[z][w])
        if left != right:
            report.fail([list(g.elements[v]) for v in (x, y, z, w)])
    logger.debug("pentagon: %s quadruples, %s violations", report.checked, len(report.violations))
    return report


def _hexagon(phi: Scalar3, ratio, name: str) -> CheckReport:
    g = phi.group
    n = g.size
    s = g.sum_table
    report = CheckReport(name)
    for x, y, z in itertools.product(range(n), repeat=3):
        report.checked += 1
        left = phi.at(y, z, x) * ratio(x, s[y][z]) * phi.at(x, y, z)
        right = ratio(x, z) * phi.at(y, x, z) * ratio(x, y)
        if left != right:
            report.fail({"identity": name, "triple": [list(g.elements[v]) for v in (x, y, z)]})
    return report


def check_hexagon(F: Cochain2, phi: Scalar3 | None = None) -> CheckReport:
    """Both hexagons; the inverse one uses R(b, a)^-1 in place of R(a, b)."""
    phi = phi or coboundary3(F)
    R = braiding(F)
    forward = _hexagon(phi, R.at, "hexagon")
    inverse = _hexagon(phi, lambda a, b: 1 / R.at(b, a), "inverse_hexagon")
    report = forward.merge(inverse)
    report.details = {"hexagon": forward.checked, "inverse_hexagon": inverse.checked}
    report.checked = forward.checked
    logger.debug("hexagon: %s triples, %s violations", report.checked, len(report.violations))
    return report
