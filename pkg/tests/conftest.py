from __future__ import annotations

import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from critical_configs import Camera, CameraPair, InvalidInputError, canonical_pair, fundamental_form, pullback_quadric  # noqa: E402
from oracles import brute_rank  # noqa: E402

# The twelve representative forms F0, one per way a line through F_P meets the rank-2 locus.
ROWS = [
    ((0, 0, 0), (1, 0, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 0, 0), (0, 0, 1)),
    ((0, 0, 0), (0, 0, 1), (1, 0, 0)),
    ((0, 0, 1), (0, 1, 0), (1, 0, 0)),
    ((0, 0, 0), (0, 0, 0), (0, 0, 1)),
    ((0, 1, 0), (0, 0, 0), (0, 0, 0)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 0)),
    ((1, 0, 0), (0, 0, 0), (0, 0, 0)),
    ((0, 0, 1), (0, 0, 0), (0, 0, 0)),
    ((1, 0, 1), (1, 1, 0), (0, 0, 0)),
    ((0, 0, 0), (0, 0, 1), (0, 1, 0)),
]

# smooth ruled quadric whose extra rank-2 forms have irrational parameters
IRRATIONAL_F0 = ((1, 0, 0), (0, -2, 0), (0, 0, 1))


@pytest.fixture
def pair():
    return canonical_pair()


@pytest.fixture
def fp(pair):
    return fundamental_form(pair)


def row_quadric(k: int, pair=None):
    """Pullback quadric of row ``k`` (1-based) for the canonical pair."""
    pair = pair or canonical_pair()
    return pullback_quadric(ROWS[k - 1], pair)


def random_points_on(S, pair, n: int, rng: random.Random, seeds=(), spread: int = 9):
    """``n`` rational points of ``S`` (not the centers), generated by secant lines.

    A random line through a known smooth point of ``S`` meets it again at a
    rational point.  Every new point joins the pool of base points.  When
    every real point of ``S`` is singular (a double plane, or complex
    planes meeting in a real line) the points come from the singular locus.
    """
    m = [[Fraction(v) for v in row] for row in S.matrix]

    def bil(a, b):
        return sum(m[i][j] * a[i] * b[j] for i in range(4) for j in range(4))

    def smooth(p):
        return any(sum(m[i][j] * p[j] for j in range(4)) != 0 for i in range(4))

    centers = [tuple(Fraction(v) for v in c) for c in pair.centers]
    pool = [p for p in centers + [tuple(Fraction(v) for v in s) for s in seeds] if smooth(p)]
    if S.rank == 1 or (S.rank == 2 and not pool and _definite_pair(m)):
        plane = S.singular_points()
        out = []
        while len(out) < n:
            cs = [rng.randint(-spread, spread) for _ in plane]
            x = tuple(sum(c * v[i] for c, v in zip(cs, plane)) for i in range(4))
            if any(x) and not _is_center(x, centers):
                out.append(x)
        return out
    if not pool:
        raise ValueError("need a smooth seed point")
    out = []
    while len(out) < n:
        p = rng.choice(pool)
        d = tuple(Fraction(rng.randint(-spread, spread)) for _ in range(4))
        sd = bil(d, d)
        if sd == 0:
            continue
        t = -2 * bil(p, d) / sd
        if t == 0:
            continue
        x = tuple(a + t * b for a, b in zip(p, d))
        if not any(x) or _is_center(x, centers):
            continue
        out.append(x)
        if smooth(x):
            pool.append(x)
    return out


def _definite_pair(m):
    eig = np.linalg.eigvalsh(np.array(m, dtype=float))
    return (eig > 1e-9).sum() == 2 or (eig < -1e-9).sum() == 2


def _is_center(x, centers):
    return any(all(x[i] * c[j] == x[j] * c[i] for i in range(4) for j in range(4)) for c in centers)


# smooth seed points for quadrics whose centers are both singular
SEEDS = {7: [(1, 0, 0, 0), (0, 1, 0, 0)]}


def random_camera(rng, spread=5):
    while True:
        m = [[rng.randint(-spread, spread) for _ in range(4)] for _ in range(3)]
        if brute_rank(m) == 3:
            return Camera(m)


def random_pair(rng):
    while True:
        try:
            return CameraPair(random_camera(rng), random_camera(rng))
        except InvalidInputError:
            continue
