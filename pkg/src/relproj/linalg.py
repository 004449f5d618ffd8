"""Exact rational matrices.

Thin layer over sympy's ``DomainMatrix`` on the ``QQ`` domain. Scalars leave
this module as ``fractions.Fraction``; zero-sized shapes are handled here so
callers never special-case empty components.
"""
from fractions import Fraction
from typing import Iterable, Sequence

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def matrix(rows: Sequence[Sequence], shape: tuple[int, int] | None = None) -> DomainMatrix:
    rows = [[to_qq(v) for v in row] for row in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    if not rows and shape[0]:
        raise ValueError(f"no rows given for shape {shape}")
    return DomainMatrix(rows, shape, QQ)


def sparse(entries: dict[tuple[int, int], Fraction], shape: tuple[int, int]) -> DomainMatrix:
    rows: dict[int, dict[int, object]] = {}
    for (i, j), value in entries.items():
        if value:
            rows.setdefault(i, {})[j] = to_qq(value)
    return DomainMatrix(rows, shape, QQ)


def zeros(m: int, n: int) -> DomainMatrix:
    return matrix([[ZERO] * n for _ in range(m)], (m, n))


def identity(n: int) -> DomainMatrix:
    return matrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], (n, n))


def diagonal(values: Sequence[Fraction]) -> DomainMatrix:
    n = len(values)
    return matrix([[values[i] if i == j else ZERO for j in range(n)] for i in range(n)], (n, n))


def column(values: Sequence) -> DomainMatrix:
    return matrix([[v] for v in values], (len(values), 1))


def entries(m: DomainMatrix) -> list[list[Fraction]]:
    rows, cols = m.shape
    if rows == 0:
        return []
    if cols == 0:
        return [[] for _ in range(rows)]
    return [[to_fraction(v) for v in row] for row in m.to_dense().to_list()]


def flat(m: DomainMatrix) -> Vector:
    """Column vector (n x 1) to a tuple."""
    return tuple(row[0] for row in entries(m)) if m.shape[1] else tuple(ZERO for _ in range(m.shape[0]))


def _aligned(a: DomainMatrix, b: DomainMatrix) -> tuple[DomainMatrix, DomainMatrix]:
    """sympy refuses to mix sparse and dense operands."""
    if a.rep.fmt != b.rep.fmt:
        return a.to_dense(), b.to_dense()
    return a, b


def mul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        return zeros(a.shape[0], b.shape[1])
    a, b = _aligned(a, b)
    return a.matmul(b)


def chain(*ms: DomainMatrix) -> DomainMatrix:
    """Product ms[0] * ms[1] * ... (rightmost applied first)."""
    result = ms[-1]
    for m in reversed(ms[:-1]):
        result = mul(m, result)
    return result


def add(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} + {b.shape}")
    if 0 in a.shape:
        return a
    a, b = _aligned(a, b)
    return a + b


def sub(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} - {b.shape}")
    if 0 in a.shape:
        return a
    a, b = _aligned(a, b)
    return a - b


def scale(m: DomainMatrix, c) -> DomainMatrix:
    if 0 in m.shape:
        return m
    return m * to_qq(c)


def transpose(m: DomainMatrix) -> DomainMatrix:
    if 0 in m.shape:
        return zeros(m.shape[1], m.shape[0])
    return m.transpose()


def equal(a: DomainMatrix, b: DomainMatrix) -> bool:
    return a.shape == b.shape and entries(a) == entries(b)


def is_zero(m: DomainMatrix) -> bool:
    return not any(any(row) for row in entries(m))


def hstack(blocks: Sequence[DomainMatrix], rows: int) -> DomainMatrix:
    data = [[] for _ in range(rows)]
    for block in blocks:
        for i, row in enumerate(entries(block)):
            data[i].extend(row)
    cols = sum(b.shape[1] for b in blocks)
    return matrix(data, (rows, cols))


def vstack(blocks: Sequence[DomainMatrix], cols: int) -> DomainMatrix:
    data: list[list[Fraction]] = []
    for block in blocks:
        data.extend(entries(block))
    return matrix(data, (len(data), cols))


def from_columns(columns: Sequence[Sequence[Fraction]], rows: int) -> DomainMatrix:
    return matrix([[c[i] for c in columns] for i in range(rows)], (rows, len(columns)))


def submatrix(m: DomainMatrix, rows: Sequence[int], cols: Sequence[int]) -> DomainMatrix:
    data = entries(m)
    return matrix([[data[i][j] for j in cols] for i in rows], (len(rows), len(cols)))


def rref(m: DomainMatrix) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    """Nonzero rows of the reduced row echelon form and the pivot columns."""
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return [], ()
    reduced, pivots = m.to_dense().rref()
    pivots = tuple(int(p) for p in pivots)
    return entries(reduced)[: len(pivots)], pivots


def rank(m: DomainMatrix) -> int:
    return len(rref(m)[1])


def nullspace(m: DomainMatrix) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}, one vector per free column."""
    cols = m.shape[1]
    rows, pivots = rref(m)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [ZERO] * cols
        v[free] = ONE
        for r, p in enumerate(pivots):
            v[p] = -rows[r][free]
        basis.append(v)
    return basis


def row_space(vectors: Iterable[Sequence[Fraction]], cols: int) -> list[list[Fraction]]:
    """Canonical echelon basis of the span of ``vectors``."""
    data = [list(v) for v in vectors]
    if not data:
        return []
    return rref(matrix(data, (len(data), cols)))[0]


def column_space(m: DomainMatrix) -> list[list[Fraction]]:
    return row_space(entries(transpose(m)), m.shape[0])


def solve(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix | None:
    """A particular solution X of a X = b, free variables set to zero."""
    m, n = a.shape
    k = b.shape[1]
    if b.shape[0] != m:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if m == 0:
        return zeros(n, k)
    augmented = [ra + rb for ra, rb in zip(entries(a), entries(b))]
    if n + k == 0:
        return zeros(0, 0)
    rows, pivots = rref(matrix(augmented, (m, n + k)))
    if any(p >= n for p in pivots):
        return None
    solution = [[ZERO] * k for _ in range(n)]
    for r, p in enumerate(pivots):
        solution[p] = rows[r][n:]
    return matrix(solution, (n, k))


def inverse(m: DomainMatrix) -> DomainMatrix | None:
    n, k = m.shape
    if n != k:
        return None
    if n == 0:
        return zeros(0, 0)
    if rank(m) < n:
        return None
    return solve(m, identity(n))


def power(m: DomainMatrix, exponent: int) -> DomainMatrix:
    result = identity(m.shape[0])
    for _ in range(exponent):
        result = mul(m, result)
    return result


def trace(m: DomainMatrix) -> Fraction:
    data = entries(m)
    return sum((data[i][i] for i in range(len(data))), ZERO)


def complement_projection(
    image: Sequence[Sequence[Fraction]], size: int
) -> tuple[DomainMatrix, DomainMatrix]:
    """Projection onto, and section of, a complement of span(image).

    The complement is spanned by the standard vectors outside the pivot
    columns of the echelon form of ``image``. Returns (P, S) with
    P: k^size -> k^c, S: k^c -> k^size, P S = 1 and P killing span(image).
    """
    basis = row_space(image, size)
    pivots = [next(i for i, v in enumerate(row) if v) for row in basis]
    free = [i for i in range(size) if i not in pivots]
    section = from_columns(
        [[ONE if i == f else ZERO for i in range(size)] for f in free], size
    )
    if not free:
        return zeros(0, size), section
    full = from_columns(list(basis) + [[ONE if i == f else ZERO for i in range(size)] for f in free], size)
    inv = inverse(full)
    projection = submatrix(inv, range(len(basis), size), range(size))
    return projection, section
