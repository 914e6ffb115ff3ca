"""Independent reference computations used to check the library.

Nothing here imports the package's linear algebra: determinants come from
the Leibniz expansion, ranks from brute-force minors, and quadric geometry
from floating-point eigenvalues on small integer matrices.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def leibniz_det(m) -> Fraction:
    n = len(m)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= Fraction(m[i][j])
            if term == 0:
                break
        total += term
    return total


def brute_rank(m) -> int:
    """Largest k with a nonzero k x k minor."""
    rows, cols = len(m), len(m[0]) if m else 0
    for k in range(min(rows, cols), 0, -1):
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                if leibniz_det([[m[i][j] for j in ci] for i in ri]) != 0:
                    return k
    return 0


def proj_eq(u, v) -> bool:
    """Projective equality by vanishing 2x2 minors."""
    u = [Fraction(x) for x in np.ravel(np.array(u, dtype=object))]
    v = [Fraction(x) for x in np.ravel(np.array(v, dtype=object))]
    return len(u) == len(v) and all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(len(u)))


def quad_value(S, x) -> Fraction:
    return sum(Fraction(S[i][j]) * Fraction(x[i]) * Fraction(x[j]) for i in range(4) for j in range(4))


def kernel_basis(m):
    """Exact kernel by Gaussian elimination written out longhand."""
    rows = [[Fraction(v) for v in r] for r in m]
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(v)
    return basis


def line_in_quadric(S, a, b) -> bool:
    """Whether the line through ``a`` and ``b`` lies on the quadric."""
    ab = sum(Fraction(S[i][j]) * Fraction(a[i]) * Fraction(b[j]) for i in range(4) for j in range(4))
    return quad_value(S, a) == 0 and quad_value(S, b) == 0 and ab == 0


def geometric_kind(S, c1, c2) -> str:
    """Classify a quadric through two centers from rank, signature and incidences."""
    r = brute_rank(S)
    eig = np.linalg.eigvalsh(np.array([[float(v) for v in row] for row in S]))
    scale = max(abs(eig))
    pos = int(sum(e > 1e-9 * scale for e in eig))
    neg = int(sum(e < -1e-9 * scale for e in eig))
    baseline_on = line_in_quadric(S, c1, c2)
    kern = kernel_basis(S)

    def singular(c):
        return all(sum(Fraction(S[i][j]) * Fraction(c[j]) for j in range(4)) == 0 for i in range(4))

    if r == 4:
        if (pos, neg) == (2, 2):
            return "smooth-on-line" if baseline_on else "smooth-not-on-line"
        return "smooth-non-ruled"
    if r == 3:
        assert len(kern) == 1
        if singular(c1) or singular(c2):
            return "cone-vertex"
        return "cone-on-line" if baseline_on else "cone-not-on-line"
    if r == 2:
        if pos == 2 or neg == 2:
            return "complex-planes"
        n_sing = int(singular(c1)) + int(singular(c2))
        if n_sing == 2:
            return "planes-both-on-singular"
        if n_sing == 1:
            return "planes-one-on-singular"
        return "planes-same-plane" if baseline_on else "planes-different"
    return "double-plane"
