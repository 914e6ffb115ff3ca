"""Exact root profiles of binary forms of degree at most three.

A binary form of degree ``d`` in ``(alpha : beta)`` is stored as the
coefficient tuple ``(c_0, ..., c_d)`` where ``c_k`` multiplies
``alpha**(d-k) * beta**k``.  Roots are points of the projective line; the
point ``(1 : 0)`` (``beta = 0``) is an ordinary root like any other.

Univariate helpers work on ascending coefficient lists (index = power of
``t = alpha / beta``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as igcd
from math import lcm
from typing import Callable, Sequence

from .projective import InvalidInputError, nullspace, to_fraction

DEFAULT_WIDTH = Fraction(1, 2**64)

Poly = list  # ascending Fractions


class ZeroPolynomialError(InvalidInputError):
    """The form vanishes identically, so it has no finite root profile."""


# --------------------------------------------------------------------------
# univariate arithmetic over Q
# --------------------------------------------------------------------------


def trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Poly) -> int:
    return len(trim(p)) - 1


def evaluate(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Poly) -> Poly:
    return trim([k * c for k, c in enumerate(p)][1:])


def sub(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return trim([x - y for x, y in zip(a, b)])


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def divmod_poly(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = trim(r)
    return trim(q), r


def monic(p: Poly) -> Poly:
    p = trim(p)
    return [c / p[-1] for c in p] if p else []


def gcd(a: Poly, b: Poly) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = lc * prod(g_i ** i)`` with square-free, pairwise coprime ``g_i``."""
    p = monic(p)
    if degree(p) <= 0:
        return []
    out = []
    dp = derivative(p)
    a = gcd(p, dp)
    b = divmod_poly(p, a)[0]
    c = divmod_poly(dp, a)[0]
    d = sub(c, derivative(b))
    i = 1
    while degree(b) > 0:
        a = gcd(b, d)
        if degree(a) > 0:
            out.append((a, i))
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = sub(c, derivative(b))
        i += 1
    return out


def primitive_integer(p: Poly) -> list[int]:
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = 0
    for x in ints:
        g = igcd(g, x)
    return [x // g for x in ints]


# --------------------------------------------------------------------------
# Sturm sequences
# --------------------------------------------------------------------------


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [trim(p), derivative(p)]
    while degree(seq[-1]) > 0:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def sign_variations(seq: list[Poly], x: Fraction) -> int:
    signs = [v for v in (evaluate(p, x) for p in seq) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every real root lies in ``(-B, B)``."""
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Half-open intervals ``(a, b]``, each containing exactly one real root of square-free ``p``."""
    seq = sturm_sequence(p)
    bound = root_bound(p)
    out = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = sign_variations(seq, a) - sign_variations(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    return sorted(out)


def refine(p: Poly, a: Fraction, b: Fraction, width: Fraction, seq=None) -> tuple[Fraction, Fraction]:
    seq = seq or sturm_sequence(p)
    while b - a > width:
        if evaluate(p, b) == 0:
            return b, b
        m = (a + b) / 2
        if sign_variations(seq, a) - sign_variations(seq, m) == 1:
            b = m
        else:
            a = m
    return a, b


# --------------------------------------------------------------------------
# root profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    """A real root of a binary form.

    Exactly one of ``point`` and ``interval`` is set.  ``point`` is the
    exact projective point ``(alpha, beta)`` with ``beta`` in ``{0, 1}``;
    ``interval`` brackets the irrational value of ``alpha / beta``.
    """

    multiplicity: int
    point: tuple[Fraction, Fraction] | None = None
    interval: tuple[Fraction, Fraction] | None = None

    @property
    def exact(self) -> bool:
        return self.point is not None

    def ratio(self) -> float:
        """Approximate ``alpha / beta`` (``inf`` for the point at infinity)."""
        if self.point is not None:
            a, b = self.point
            return float("inf") if b == 0 else float(a / b)
        lo, hi = self.interval
        return float((lo + hi) / 2)


@dataclass(frozen=True)
class RootProfile:
    degree: int
    real_simple: int
    real_double: int
    real_triple: int
    complex_pairs: int
    roots: tuple[Root, ...] = field(default_factory=tuple)
    # square-free factors of the dehomogenized form, kept for later refinement
    factors: tuple[tuple[tuple[Fraction, ...], int], ...] = field(default_factory=tuple, repr=False)

    @property
    def real_count(self) -> int:
        return self.real_simple + self.real_double + self.real_triple

    def multiplicity_at(self, point: tuple) -> int:
        a, b = (to_fraction(x) for x in point)
        for r in self.roots:
            if r.point is not None and r.point[0] * b == r.point[1] * a:
                return r.multiplicity
        return 0


def _rational_candidate(p_int: list[int], a: Fraction, b: Fraction, seq) -> tuple[Fraction | None, Fraction, Fraction]:
    """Detect whether the single root of ``p`` in ``(a, b]`` is rational.

    A rational root of a primitive integer polynomial has denominator
    dividing the leading coefficient ``L``; two such rationals differ by at
    least ``1/L**2``, so once the bracket is narrower than ``1/(2 L**2)`` the
    closest fraction with denominator at most ``L`` is the only candidate.
    """
    p = [Fraction(c) for c in p_int]
    lead = abs(p_int[-1])
    a, b = refine(p, a, b, Fraction(1, 4 * lead * lead), seq)
    if a == b:
        return a, a, a
    cand = ((a + b) / 2).limit_denominator(lead)
    if a < cand <= b and evaluate(p, cand) == 0:
        return cand, a, b
    return None, a, b


def binary_root_profile(coeffs: Sequence, width: Fraction = DEFAULT_WIDTH) -> RootProfile:
    """Root profile of a nonzero binary form given as ``(c_0, ..., c_d)``."""
    c = [to_fraction(x) for x in coeffs]
    d = len(c) - 1
    if d < 0 or all(x == 0 for x in c):
        raise ZeroPolynomialError("binary form is identically zero")
    if d > 3:
        raise InvalidInputError("only forms of degree at most 3 are supported")
    at_infinity = next(i for i, x in enumerate(c) if x != 0)
    f = trim([c[d - j] for j in range(d + 1)])  # f(t) = p(t, 1), ascending

    roots: list[Root] = []
    counts = {1: 0, 2: 0, 3: 0}
    complex_pairs = 0
    if at_infinity:
        roots.append(Root(at_infinity, point=(Fraction(1), Fraction(0))))
        counts[at_infinity] += 1

    factors = squarefree_decomposition(f)
    for g, mult in factors:
        g_int = primitive_integer(g)
        g_frac = [Fraction(x) for x in g_int]
        seq = sturm_sequence(g_frac)
        intervals = isolate_real_roots(g_frac)
        complex_pairs += (degree(g_frac) - len(intervals)) // 2
        for a, b in intervals:
            r, a, b = _rational_candidate(g_int, a, b, seq)
            if r is not None:
                roots.append(Root(mult, point=(r, Fraction(1))))
            else:
                a, b = refine(g_frac, a, b, width, seq)
                roots.append(Root(mult, interval=(a, b)))
            counts[mult] += 1
        if (degree(g_frac) - len(intervals)) and mult > 1:
            # a repeated complex pair needs degree >= 4
            raise AssertionError("repeated complex roots in a form of degree <= 3")

    roots.sort(key=lambda r: r.ratio())
    return RootProfile(
        degree=d,
        real_simple=counts[1],
        real_double=counts[2],
        real_triple=counts[3],
        complex_pairs=complex_pairs,
        roots=tuple(roots),
        factors=tuple((tuple(g), m) for g, m in factors),
    )


def cubic_root_profile(coeffs: Sequence, width: Fraction = DEFAULT_WIDTH) -> RootProfile:
    """Root profile of ``c0 a^3 + c1 a^2 b + c2 a b^2 + c3 b^3``.

    Raises :class:`ZeroPolynomialError` when every coefficient is zero; the
    caller is expected to treat that as "the whole line lies in the locus".
    """
    if len(coeffs) != 4:
        raise InvalidInputError("a binary cubic has exactly 4 coefficients")
    return binary_root_profile(coeffs, width)


def refine_root(profile: RootProfile, root: Root, width: Fraction) -> tuple[Fraction, Fraction]:
    """Narrow the isolating interval of an irrational root to ``width``."""
    if root.interval is None:
        raise InvalidInputError("root is exact")
    lo, hi = root.interval
    for g, _ in profile.factors:
        g = list(g)
        seq = sturm_sequence(g)
        if sign_variations(seq, lo) - sign_variations(seq, hi) == 1:
            return refine(g, lo, hi, width, seq)
    raise AssertionError("interval does not bracket a root of any factor")


# --------------------------------------------------------------------------
# binary forms
# --------------------------------------------------------------------------


def _sample_points(n: int) -> list[tuple[int, int]]:
    pts = [(1, 0), (0, 1)]
    k = 1
    while len(pts) < n:
        pts.append((1, k))
        k += 1
    return pts[:n]


def binary_form_from_function(fn: Callable[[Fraction, Fraction], Fraction], deg: int) -> tuple[Fraction, ...]:
    """Interpolate a binary form of known degree from exact evaluations."""
    pts = _sample_points(deg + 1)
    rows = []
    for a, b in pts:
        a, b = Fraction(a), Fraction(b)
        rows.append(tuple(a ** (deg - k) * b**k for k in range(deg + 1)) + (-to_fraction(fn(a, b)),))
    (sol,) = nullspace(tuple(rows))
    # sol is normalized with first nonzero entry 1; rescale so the last entry is 1
    return tuple(x / sol[-1] for x in sol[:-1])


def binary_form_eval(coeffs: Sequence[Fraction], a, b) -> Fraction:
    d = len(coeffs) - 1
    a, b = to_fraction(a), to_fraction(b)
    return sum((c * a ** (d - k) * b**k for k, c in enumerate(coeffs)), Fraction(0))


def binary_gcd(forms: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    """Greatest common divisor of nonzero binary forms, as a binary form.

    Zero forms are ignored.  The result is scaled to have leading
    nonzero coefficient 1 and has degree ``m + deg g`` where ``m`` is the
    smallest power of ``beta`` dividing every form and ``g`` the univariate
    gcd of the dehomogenizations.
    """
    forms = [[to_fraction(x) for x in f] for f in forms if any(x != 0 for x in f)]
    if not forms:
        raise ZeroPolynomialError("all forms vanish identically")
    m = min(next(i for i, x in enumerate(f) if x != 0) for f in forms)
    g: Poly = []
    for f in forms:
        d = len(f) - 1
        g = gcd(g, trim([f[d - j] for j in range(d + 1)]))
    dg = degree(g)
    total = m + dg
    out = [Fraction(0)] * (total + 1)
    # g(t) * beta^dg  ->  coefficient of alpha^j beta^(dg-j) is g[j]; then times beta^m
    for j in range(dg + 1):
        out[dg - j + m] = g[j]
    return tuple(out)
