"""Quadrics through two camera centers and the pencils of forms behind them.

A quadric through both centers corresponds to a line of bilinear forms
through the pair's own fundamental form ``F_P``.  How that line meets the
cubic hypersurface of singular forms decides whether the quadric carries
conjugate reconstructions, and how many.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .camera import CameraPair
from .fundamental import BilinearForm, fundamental_form
from .polynomial import (
    Root,
    RootProfile,
    binary_form_from_function,
    binary_gcd,
    binary_root_profile,
    cubic_root_profile,
    refine_root,
)
from .projective import (
    InvalidInputError,
    Matrix,
    Vector,
    combine,
    det,
    dot,
    flatten,
    is_zero,
    mat,
    matmul,
    matvec,
    minors2,
    nullspace,
    proj_equal,
    rank,
    symmetric_part,
    transpose,
    vec,
)

INFINITE = math.inf


class InvalidPencilError(InvalidInputError):
    pass


@dataclass(frozen=True)
class Quadric:
    """A quadric surface ``x^T M x = 0`` with ``M`` symmetric and nonzero."""

    matrix: Matrix

    def __post_init__(self):
        m = mat(self.matrix)
        if len(m) != 4 or len(m[0]) != 4:
            raise InvalidInputError("a quadric is a 4x4 matrix")
        if any(m[i][j] != m[j][i] for i in range(4) for j in range(4)):
            raise InvalidInputError("quadric matrix must be symmetric")
        if is_zero(m):
            raise InvalidInputError("the zero matrix is not a quadric")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_any(cls, m) -> Quadric:
        """Quadric of ``x^T m x`` for an arbitrary (possibly non-symmetric) ``m``."""
        return cls(symmetric_part(mat(m)))

    @classmethod
    def from_monomials(cls, terms: dict) -> Quadric:
        """Build from ``{(i, j): c}`` meaning ``c * x_i * x_j``."""
        m = [[Fraction(0)] * 4 for _ in range(4)]
        for (i, j), c in terms.items():
            c = Fraction(c)
            if i == j:
                m[i][i] += c
            else:
                m[i][j] += c / 2
                m[j][i] += c / 2
        return cls(tuple(tuple(r) for r in m))

    def __call__(self, x) -> Fraction:
        x = vec(x)
        return dot(x, matvec(self.matrix, x))

    def contains(self, x) -> bool:
        return self(x) == 0

    def bilinear(self, x, y) -> Fraction:
        return dot(vec(x), matvec(self.matrix, vec(y)))

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    def singular_points(self) -> list[Vector]:
        """Basis of the singular locus (the kernel of the matrix)."""
        return nullspace(self.matrix)

    def contains_line(self, a, b) -> bool:
        return self(a) == 0 and self(b) == 0 and self.bilinear(a, b) == 0

    def __eq__(self, other):
        if not isinstance(other, Quadric):
            return NotImplemented
        return proj_equal(self.matrix, other.matrix)

    __hash__ = None


def pullback_quadric(F, pair: CameraPair) -> Quadric | None:
    """Quadric ``x -> F(P1 x, P2 x)``; ``None`` when it vanishes identically.

    It vanishes exactly when ``F`` is the pair's own fundamental form.
    """
    m = mat(getattr(F, "matrix", F))
    p1, p2 = pair.first.matrix, pair.second.matrix
    s = symmetric_part(matmul(matmul(transpose(p1), m), p2))
    if is_zero(s):
        return None
    return Quadric(s)


# --------------------------------------------------------------------------
# pencils
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FormPencil:
    """The line of forms ``alpha * generator + beta * base``."""

    base: BilinearForm
    generator: BilinearForm

    def __post_init__(self):
        if proj_equal(self.base.matrix, self.generator.matrix):
            raise InvalidPencilError("generator equals base; the pencil is not a line")

    @classmethod
    def from_matrices(cls, base, generator) -> FormPencil:
        return cls(BilinearForm(base), BilinearForm(generator))

    def member(self, alpha, beta) -> Matrix:
        return combine(alpha, self.generator.matrix, beta, self.base.matrix)

    def det_cubic(self) -> tuple[Fraction, ...]:
        """Coefficients of ``det(alpha F0 + beta F_P)`` as a binary cubic."""
        return binary_form_from_function(lambda a, b: det(self.member(a, b)), 3)

    def minor_forms(self) -> list[tuple[Fraction, ...]]:
        """The nine 2x2 minors along the pencil, each a binary quadratic."""
        return [
            binary_form_from_function(lambda a, b, k=k: minors2(self.member(a, b))[k], 2)
            for k in range(9)
        ]


def form_line_from_quadric(S: Quadric, pair: CameraPair) -> FormPencil:
    """The pencil of forms pulling back to ``S``.

    Solves ``sym(P1^T F P2) = lam * S`` for ``(F, lam)``.  The base is the
    pair's fundamental form; the generator is the solution with ``lam = 1``
    whose entry at the base's first nonzero position is zero.
    """
    c1, c2 = pair.centers
    if not (S.contains(c1) and S.contains(c2)):
        raise InvalidInputError("quadric does not pass through camera centers")
    F_P = fundamental_form(pair)
    idx = [(i, j) for i in range(4) for j in range(i, 4)]
    columns = []
    for k in range(9):
        e = tuple(tuple(Fraction(int(3 * r + c == k)) for c in range(3)) for r in range(3))
        q = symmetric_part(matmul(matmul(transpose(pair.first.matrix), e), pair.second.matrix))
        columns.append([q[i][j] for i, j in idx])
    columns.append([-S.matrix[i][j] for i, j in idx])
    system = tuple(tuple(col[r] for col in columns) for r in range(len(idx)))
    basis = nullspace(system)
    if len(basis) != 2:
        raise AssertionError(f"expected a 2-dimensional solution space, got {len(basis)}")
    sol = next(v for v in basis if v[-1] != 0)
    f0 = [x / sol[-1] for x in sol[:9]]
    fp = flatten(F_P.matrix)
    k = next(i for i, x in enumerate(fp) if x != 0)
    f0 = [x - f0[k] / fp[k] * y for x, y in zip(f0, fp)]
    gen = tuple(tuple(f0[3 * r : 3 * r + 3]) for r in range(3))
    return FormPencil(F_P, BilinearForm(gen))


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


class CaseTag(str, Enum):
    THREE_REAL = "three-distinct-real"
    COMPLEX_PAIR = "complex-pair"
    DOUBLE_AT_FP = "double-at-FP"
    DOUBLE_AT_OTHER = "double-at-other"
    TRIPLE_AT_FP = "triple-at-FP"
    RANK1_DOUBLE = "rank1-double"
    TWO_REAL_RANK1 = "line-in-locus/two-real-rank1"
    TWO_COMPLEX_RANK1 = "line-in-locus/two-complex-rank1"
    ONE_RANK1_MULT2 = "line-in-locus/one-rank1-mult2"
    ONE_RANK1_MULT1 = "line-in-locus/one-rank1-mult1"
    SHARED_KERNEL = "line-in-locus/no-rank1-shared-kernel"
    DISTINCT_KERNELS = "line-in-locus/no-rank1-distinct-kernels"

    @property
    def in_locus(self) -> bool:
        return self.value.startswith("line-in-locus")


class QuadricKind(str, Enum):
    SMOOTH_NOT_ON_LINE = "smooth quadric, cameras not on a line"
    SMOOTH_ON_LINE = "smooth quadric, cameras on a line"
    CONE_NOT_ON_LINE = "cone, cameras not on a line"
    CONE_VERTEX = "cone, one camera at the vertex"
    PLANES_SAME_PLANE = "two planes, cameras in the same plane"
    PLANES_ONE_ON_SINGULAR = "two planes, one camera on the singular line"
    PLANES_BOTH_ON_SINGULAR = "two planes, cameras on the singular line"
    DOUBLE_PLANE = "double plane, cameras in the plane"
    SMOOTH_NON_RULED = "smooth non-ruled quadric"
    PLANES_DIFFERENT = "two planes, cameras in different planes"
    CONE_ON_LINE = "cone, both cameras on a line, neither at the vertex"
    COMPLEX_PLANES = "two complex-conjugate planes, cameras on their real line"


@dataclass(frozen=True)
class AppendixCase:
    tag: CaseTag
    cubic: tuple[Fraction, ...]
    profile: RootProfile | None = None
    rank1_gcd: tuple[Fraction, ...] | None = None
    rank1_profile: RootProfile | None = None
    # which kernels are constant along the pencil: subset of {"left", "right"}
    shared_kernels: frozenset = field(default_factory=frozenset)
    pencil: FormPencil | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class CriticalClass:
    quadric_kind: QuadricKind
    conjugate_count: float  # 0, 1, 2 or INFINITE
    conjugate_kind: QuadricKind | None = None

    @property
    def critical(self) -> bool:
        return self.conjugate_count >= 1


FP_POINT = (Fraction(0), Fraction(1))


def _sample_params() -> Iterator[tuple[int, int]]:
    yield (0, 1)
    yield (1, 0)
    k = 1
    while True:
        for a, b in ((1, k), (1, -k), (k + 1, 1), (-(k + 1), 1)):
            yield (a, b)
        k += 1


def _kernel_sharing(pencil: FormPencil) -> frozenset:
    # A kernel along the pencil is a polynomial vector of degree <= 2 in the
    # parameter, so agreement at three rank-2 members forces it constant.
    members = []
    for a, b in _sample_params():
        m = pencil.member(a, b)
        if rank(m) == 2:
            members.append(m)
        if len(members) == 3:
            break
    shared = set()
    rights = [nullspace(m)[0] for m in members]
    lefts = [nullspace(transpose(m))[0] for m in members]
    if all(proj_equal(rights[0], r) for r in rights[1:]):
        shared.add("right")
    if all(proj_equal(lefts[0], l) for l in lefts[1:]):
        shared.add("left")
    return frozenset(shared)


def classify_pencil(pencil: FormPencil) -> AppendixCase:
    """Decide which of the twelve intersection patterns the pencil shows."""
    if pencil.base.rank != 2:
        raise InvalidPencilError("pencil base must be a rank-2 fundamental form")
    cubic = pencil.det_cubic()
    if any(c != 0 for c in cubic):
        return _classify_finite(pencil, cubic)
    return _classify_in_locus(pencil, cubic)


def _classify_finite(pencil: FormPencil, cubic) -> AppendixCase:
    profile = cubic_root_profile(cubic)
    m_fp = profile.multiplicity_at(FP_POINT)
    assert m_fp >= 1, "the base form must be a root of the determinant"
    others = [r for r in profile.roots if not (r.point is not None and r.point[0] == 0)]

    def case(tag):
        return AppendixCase(tag, cubic, profile=profile, pencil=pencil)

    if profile.complex_pairs:
        return case(CaseTag.COMPLEX_PAIR)
    if m_fp == 3:
        return case(CaseTag.TRIPLE_AT_FP)
    if m_fp == 2:
        return case(CaseTag.DOUBLE_AT_FP)
    if len(others) == 1:
        (r,) = others
        if rank(pencil.member(*r.point)) == 1:
            return case(CaseTag.RANK1_DOUBLE)
        return case(CaseTag.DOUBLE_AT_OTHER)
    # three distinct real roots; a rank-1 root here would need a partner
    for r in others:
        if r.point is not None:
            assert rank(pencil.member(*r.point)) == 2, "isolated simple rank-1 intersection"
    return case(CaseTag.THREE_REAL)


def _classify_in_locus(pencil: FormPencil, cubic) -> AppendixCase:
    g = binary_gcd(pencil.minor_forms())
    shared = _kernel_sharing(pencil)
    if len(g) == 1:
        tag = CaseTag.SHARED_KERNEL if shared else CaseTag.DISTINCT_KERNELS
        return AppendixCase(tag, cubic, rank1_gcd=g, shared_kernels=shared, pencil=pencil)
    prof = binary_root_profile(g)
    if prof.complex_pairs:
        tag = CaseTag.TWO_COMPLEX_RANK1
    elif prof.real_double:
        # a doubled rank-1 form forces every member to share both kernels
        assert shared == frozenset({"left", "right"}), "double rank-1 form without shared kernels"
        tag = CaseTag.ONE_RANK1_MULT2
    elif prof.real_simple == 2:
        tag = CaseTag.TWO_REAL_RANK1
    else:
        tag = CaseTag.ONE_RANK1_MULT1
    return AppendixCase(tag, cubic, rank1_gcd=g, rank1_profile=prof, shared_kernels=shared, pencil=pencil)


_VERDICTS = {
    CaseTag.THREE_REAL: CriticalClass(QuadricKind.SMOOTH_NOT_ON_LINE, 2, QuadricKind.SMOOTH_NOT_ON_LINE),
    CaseTag.COMPLEX_PAIR: CriticalClass(QuadricKind.SMOOTH_NON_RULED, 0),
    CaseTag.DOUBLE_AT_FP: CriticalClass(QuadricKind.SMOOTH_ON_LINE, 1, QuadricKind.CONE_NOT_ON_LINE),
    CaseTag.DOUBLE_AT_OTHER: CriticalClass(QuadricKind.CONE_NOT_ON_LINE, 1, QuadricKind.SMOOTH_ON_LINE),
    CaseTag.TRIPLE_AT_FP: CriticalClass(QuadricKind.CONE_ON_LINE, 0),
    CaseTag.RANK1_DOUBLE: CriticalClass(QuadricKind.PLANES_DIFFERENT, 0),
    CaseTag.TWO_REAL_RANK1: CriticalClass(
        QuadricKind.PLANES_BOTH_ON_SINGULAR, INFINITE, QuadricKind.PLANES_BOTH_ON_SINGULAR
    ),
    CaseTag.TWO_COMPLEX_RANK1: CriticalClass(QuadricKind.COMPLEX_PLANES, 0),
    CaseTag.ONE_RANK1_MULT2: CriticalClass(QuadricKind.DOUBLE_PLANE, INFINITE, QuadricKind.DOUBLE_PLANE),
    CaseTag.ONE_RANK1_MULT1: CriticalClass(
        QuadricKind.PLANES_ONE_ON_SINGULAR, INFINITE, QuadricKind.PLANES_ONE_ON_SINGULAR
    ),
    CaseTag.SHARED_KERNEL: CriticalClass(QuadricKind.CONE_VERTEX, INFINITE, QuadricKind.CONE_VERTEX),
    CaseTag.DISTINCT_KERNELS: CriticalClass(QuadricKind.PLANES_SAME_PLANE, INFINITE, QuadricKind.PLANES_SAME_PLANE),
}


def criticality_verdict(case: AppendixCase) -> CriticalClass:
    return _VERDICTS[CaseTag(case.tag)]


def classify_quadric(S: Quadric, pair: CameraPair) -> tuple[AppendixCase, CriticalClass]:
    case = classify_pencil(form_line_from_quadric(S, pair))
    return case, criticality_verdict(case)


# --------------------------------------------------------------------------
# rank-2 members
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalForm:
    """A rank-2 member ``t F0 + F_P`` whose parameter ``t`` is irrational.

    ``interval`` brackets ``t``; :meth:`refined` narrows it exactly and
    :func:`critical_configs.numeric.realize_interval_form` turns it into a
    floating-point form.
    """

    pencil: FormPencil
    interval: tuple[Fraction, Fraction]
    profile: RootProfile = field(repr=False)
    multiplicity: int = 1

    def refined(self, width: Fraction) -> IntervalForm:
        lo, hi = refine_root(self.profile, Root(self.multiplicity, interval=self.interval), width)
        return IntervalForm(self.pencil, (lo, hi), self.profile, self.multiplicity)


@dataclass(frozen=True)
class FormFamily:
    """All members of a pencil inside the singular locus, minus excluded points.

    Excluded are the base form and the exact rank-1 members; irrational
    rank-1 members can never be hit by a rational parameter.
    """

    pencil: FormPencil
    excluded: tuple[tuple[Fraction, Fraction], ...]

    def is_excluded(self, alpha, beta) -> bool:
        a, b = Fraction(alpha), Fraction(beta)
        return any(x * b == y * a for x, y in self.excluded)

    def member(self, alpha, beta) -> BilinearForm:
        if self.is_excluded(alpha, beta):
            raise InvalidInputError("parameter is excluded from the family")
        f = BilinearForm(self.pencil.member(alpha, beta))
        assert f.rank == 2
        return f

    def sample(self, n: int, seed: int | None = None) -> list[tuple[tuple[Fraction, Fraction], BilinearForm]]:
        """``n`` distinct members with their ``(alpha, beta)`` parameters.

        Without a seed the parameters follow a fixed deterministic order;
        with one they are random small rationals drawn from ``random.Random(seed)``.
        """
        if seed is None:
            params = ((Fraction(a), Fraction(b)) for a, b in _sample_params())
        else:
            params = _random_params(random.Random(seed))
        out: list = []
        for a, b in params:
            if (a, b) == (0, 0) or self.is_excluded(a, b):
                continue
            if any(x * b == y * a for (x, y), _ in out):
                continue
            out.append(((a, b), self.member(a, b)))
            if len(out) == n:
                break
        return out


def _random_params(rng: random.Random) -> Iterator[tuple[Fraction, Fraction]]:
    while True:
        yield Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(1)


@dataclass(frozen=True)
class Rank2Forms:
    """Rank-2 members of a pencil other than its base."""

    case: AppendixCase
    forms: tuple  # BilinearForm or IntervalForm, finite cases only
    family: FormFamily | None = None

    @property
    def exact(self) -> bool:
        return all(isinstance(f, BilinearForm) for f in self.forms)


def rank2_forms_on_line(pencil: FormPencil, case: AppendixCase | None = None) -> Rank2Forms:
    case = case or classify_pencil(pencil)
    verdict = criticality_verdict(case)
    if not verdict.critical:
        return Rank2Forms(case, ())
    if case.tag.in_locus:
        excluded = [FP_POINT]
        if case.rank1_profile is not None:
            excluded += [r.point for r in case.rank1_profile.roots if r.point is not None]
        return Rank2Forms(case, (), FormFamily(pencil, tuple(excluded)))
    forms = []
    for r in case.profile.roots:
        if r.point is not None:
            if r.point[0] == 0:
                continue
            f = BilinearForm(pencil.member(*r.point))
            assert f.rank == 2
            forms.append(f)
        else:
            forms.append(IntervalForm(pencil, r.interval, case.profile, r.multiplicity))
    return Rank2Forms(case, tuple(forms))
