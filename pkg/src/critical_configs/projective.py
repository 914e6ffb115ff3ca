"""Exact rational linear algebra over ``fractions.Fraction``.

Vectors are tuples of Fractions and matrices are tuples of row tuples.  All
rank and kernel decisions are exact; nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # Floats are exact binary rationals; never round-trip through str.
        return Fraction(value)
    return Fraction(value)


def vec(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise InvalidInputError("ragged matrix")
    return m


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(m: Matrix, s) -> Matrix:
    s = to_fraction(s)
    return tuple(tuple(s * x for x in row) for row in m)


def combine(alpha, a: Matrix, beta, b: Matrix) -> Matrix:
    """Return ``alpha * a + beta * b``."""
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    return tuple(tuple(alpha * x + beta * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def symmetric_part(m: Matrix) -> Matrix:
    half = Fraction(1, 2)
    return tuple(tuple(half * (m[i][j] + m[j][i]) for j in range(len(m))) for i in range(len(m)))


def flatten(m: Matrix) -> Vector:
    return tuple(x for row in m for x in row)


def is_zero(v) -> bool:
    if v and isinstance(v[0], tuple):
        return all(x == 0 for row in v for x in row)
    return all(x == 0 for x in v)


def cross_matrix(e: Sequence[Fraction]) -> Matrix:
    """Antisymmetric matrix ``[e]_x`` with ``[e]_x v = e x v``."""
    a, b, c = (to_fraction(x) for x in e)
    z = Fraction(0)
    return ((z, -c, b), (c, z, -a), (-b, a, z))


def cross(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return matvec(cross_matrix(u), v)


def normalize(v: Sequence[Fraction]) -> Vector:
    """Scale ``v`` so its first nonzero coordinate is 1."""
    for x in v:
        if x != 0:
            return tuple(y / x for y in v)
    raise InvalidInputError("zero vector has no projective normalization")


def normalize_matrix(m: Matrix) -> Matrix:
    """Scale ``m`` so its first nonzero entry (row-major) is 1."""
    for x in flatten(m):
        if x != 0:
            return scale(m, 1 / x)
    raise InvalidInputError("zero matrix has no projective normalization")


def proj_equal(u: Sequence, v: Sequence) -> bool:
    """True iff ``u`` and ``v`` are nonzero multiples of each other.

    Works for vectors and, via flattening, for matrices of equal shape.
    """
    if u and isinstance(u[0], tuple):
        u, v = flatten(u), flatten(v)
    if len(u) != len(v):
        raise InvalidInputError("length mismatch in projective comparison")
    if is_zero(u) or is_zero(v):
        raise InvalidInputError("zero vector is not a projective point")
    # All 2x2 minors of [u; v] vanish.  Pivot on one nonzero coordinate of u.
    k = next(i for i, x in enumerate(u) if x != 0)
    return all(u[k] * v[i] - u[i] * v[k] == 0 for i in range(len(u)))


def _rows(m) -> list[list[Fraction]]:
    # working copy; ints would silently turn into floats under ``/``
    return [[to_fraction(x) for x in r] for r in m]


def row_echelon(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = _rows(m)
    nrows, ncols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: Matrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    if not m:
        return 0
    a = _rows(m)
    nrows, ncols = len(a), len(a[0])
    rk = 0
    prev = Fraction(1)
    for c in range(ncols):
        if rk == nrows:
            break
        p = next((i for i in range(rk, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[rk], a[p] = a[p], a[rk]
        piv = a[rk][c]
        for i in range(rk + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (piv * a[i][j] - a[i][c] * a[rk][j]) / prev
            a[i][c] = Fraction(0)
        prev = piv
        rk += 1
    return rk


def nullspace(m: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of the right kernel, each vector scaled so its first nonzero entry is 1.

    Basis vectors come from the reduced echelon form, one per free column in
    increasing order, which makes the output deterministic.
    """
    if not m:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    rows, pivots = row_echelon(m)
    n = len(m[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        basis.append(normalize(v))
    return basis


def left_nullspace(m: Matrix) -> list[Vector]:
    return nullspace(transpose(m))


def det(m: Matrix) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n <= 3:
        return _det_small(_rows(m))
    a = _rows(m)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_small(m: Matrix) -> Fraction:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def det_by_permutations(m: Matrix) -> Fraction:
    """Leibniz-formula determinant; slow, used as an independent check."""
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, p in enumerate(perm):
            term *= m[i][p]
        total += term
    return total


def minors2(m: Matrix) -> list[Fraction]:
    """All 2x2 minors of ``m``."""
    nrows, ncols = shape(m)
    return [
        m[i][k] * m[j][l] - m[i][l] * m[j][k]
        for i in range(nrows)
        for j in range(i + 1, nrows)
        for k in range(ncols)
        for l in range(k + 1, ncols)
    ]


def span_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    return rank(tuple(tuple(v) for v in vectors))


def intersect_subspaces(a: Matrix, b: Matrix) -> list[Vector]:
    """Kernel of the stacked constraint rows: points on both ``{a x = 0}`` and ``{b x = 0}``."""
    n = len(a[0]) if a else len(b[0])
    return nullspace(tuple(a) + tuple(b), ncols=n)


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
