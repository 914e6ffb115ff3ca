"""Epipolar lines on critical quadrics, permissible pairs, and the curve-type calculus."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import numeric
from .camera import Camera, CameraPair
from .fundamental import BilinearForm, fundamental_form
from .pencil import (
    IntervalForm,
    Quadric,
    classify_pencil,
    criticality_verdict,
    form_line_from_quadric,
    rank2_forms_on_line,
)
from .projective import InvalidInputError, Matrix, Vector, matmul, nullspace, rank, vec


@dataclass(frozen=True)
class SpaceLine:
    """A line of P^3 as the common zero set of two independent covectors."""

    covectors: Matrix

    def __post_init__(self):
        cov = tuple(vec(c) for c in self.covectors)
        if len(cov) != 2 or rank(cov) != 2:
            raise InvalidInputError("a line needs two independent covectors")
        object.__setattr__(self, "covectors", cov)

    @classmethod
    def through(cls, a, b) -> SpaceLine:
        return cls(tuple(nullspace((vec(a), vec(b)))))

    def points(self) -> tuple[Vector, Vector]:
        a, b = nullspace(self.covectors)
        return a, b

    def contains(self, x) -> bool:
        x = vec(x)
        return all(sum(c * v for c, v in zip(cov, x)) == 0 for cov in self.covectors)

    def lies_on(self, S: Quadric) -> bool:
        return S.contains_line(*self.points())

    def __eq__(self, other):
        if not isinstance(other, SpaceLine):
            return NotImplemented
        return rank(self.covectors + other.covectors) == 2

    __hash__ = None


def epipolar_line(P: Camera, e) -> SpaceLine:
    """Back-projection of the image point ``e``: the line through the center mapping to ``e``."""
    e = vec(e)
    annihilator = nullspace((e,))
    return SpaceLine(matmul(tuple(annihilator), P.matrix))


def epipolar_lines(pair: CameraPair, F_Q) -> tuple[SpaceLine, SpaceLine]:
    """The pair of lines on the pullback quadric attached to the conjugate form ``F_Q``.

    The first line sits over the epipole of ``F_Q`` in image 1 and passes
    through the first center; the second likewise for image 2.
    """
    F_Q = F_Q if isinstance(F_Q, BilinearForm) else BilinearForm(F_Q)
    if F_Q.rank != 2:
        raise InvalidInputError("epipolar lines need a rank-2 form")
    (e1,) = F_Q.left_kernel()
    (e2,) = F_Q.right_kernel()
    return epipolar_line(pair.first, e1), epipolar_line(pair.second, e2)


# --------------------------------------------------------------------------
# permissible pairs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PermissibleReport:
    on_quadric_through_centers: bool
    intersection_singular: bool
    singular_points_shared: bool
    same_plane_if_planes: bool
    distinct: bool

    @property
    def permissible(self) -> bool:
        return all(
            (
                self.on_quadric_through_centers,
                self.intersection_singular,
                self.singular_points_shared,
                self.same_plane_if_planes,
                self.distinct,
            )
        )

    def failures(self) -> list[str]:
        return [k for k, v in self.__dict__.items() if not v]


def _is_plane_pair(S: Quadric) -> bool:
    # real plane pair or double plane; a complex-conjugate pair has a definite 2x2 part
    r = S.rank
    if r == 1:
        return True
    if r != 2:
        return False
    # restrict to a complement of the kernel and check the sign of the determinant
    kernel = S.singular_points()
    comp = [v for v in _standard_basis() if rank(tuple(kernel) + (v,)) > len(kernel)]
    basis: list = []
    for v in comp:
        if rank(tuple(kernel) + tuple(basis) + (v,)) > len(kernel) + len(basis):
            basis.append(v)
        if len(basis) == 2:
            break
    a, b = basis
    m = S.bilinear(a, a) * S.bilinear(b, b) - S.bilinear(a, b) ** 2
    return m < 0


def _standard_basis():
    return [tuple(1 if i == j else 0 for j in range(4)) for i in range(4)]


def permissible_check(S: Quadric, centers: Sequence, g12: SpaceLine, g21: SpaceLine) -> PermissibleReport:
    """Itemized check of the four permissibility conditions (plus distinctness)."""
    p1, p2 = (vec(c) for c in centers)
    cond1 = g12.lies_on(S) and g21.lies_on(S) and g12.contains(p1) and g21.contains(p2)

    meet = nullspace(g12.covectors + g21.covectors)
    sing_rows = S.matrix
    cond2 = all(all(x == 0 for x in _apply(S, v)) for v in meet)

    cond3 = True
    for a, b in ((g12, g21), (g21, g12)):
        for v in nullspace(a.covectors + sing_rows):
            if not b.contains(v):
                cond3 = False

    cond4 = True
    if _is_plane_pair(S):
        if len(meet) == 0:
            cond4 = False  # skew lines never share a plane
        elif len(meet) == 1:
            plane_points = list(g12.points()) + list(g21.points())
            basis = _span_basis(plane_points)
            cond4 = all(S.bilinear(u, v) == 0 for u in basis for v in basis)

    distinct = not (g12 == g21)
    return PermissibleReport(cond1, cond2, cond3, cond4, distinct)


def _apply(S: Quadric, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in S.matrix)


def _span_basis(vectors):
    basis: list = []
    for v in vectors:
        if rank(tuple(basis) + (v,)) > len(basis):
            basis.append(v)
    return basis


def contains_baseline(S: Quadric, pair: CameraPair) -> bool:
    c1, c2 = pair.centers
    return S.contains_line(c1, c2)


@dataclass
class PermissibleCorrespondence:
    """Conjugates of ``(P1, P2, S)`` paired with their epipolar-line pairs."""

    entries: list  # (form, (g12, g21) or None, PermissibleReport or NumericLineCheck)
    own_pair_coincides: bool
    injective: bool

    @property
    def all_permissible(self) -> bool:
        return all(rep.permissible for _, _, rep in self.entries)


@dataclass(frozen=True)
class NumericLineCheck:
    """Float check used when the conjugate form has an irrational parameter.

    That only happens on a smooth quadric, where the singular-point
    conditions are vacuous; what remains is that both lines lie on the
    quadric, pass through their centers, and are skew.
    """

    on_quadric_residual: float
    skew: bool
    tolerance: float = field(default=numeric.DEFAULT_TOLERANCE)

    @property
    def permissible(self) -> bool:
        return self.on_quadric_residual < self.tolerance and self.skew


def conjugates_from_permissible(S: Quadric, pair: CameraPair, samples: int = 5, seed: int | None = None) -> PermissibleCorrespondence:
    """Pair every realizable conjugate with its permissible epipolar-line pair."""
    c1, c2 = pair.centers
    sing = S.singular_points()
    if sing and all(rank(tuple(sing) + (c,)) == len(sing) for c in (c1, c2)):
        raise InvalidInputError("correspondence not 1:1 in this case: both centers are singular on the quadric")
    pencil = form_line_from_quadric(S, pair)
    case = classify_pencil(pencil)
    if not criticality_verdict(case).critical:
        raise InvalidInputError("quadric is not critical for this pair")
    r2 = rank2_forms_on_line(pencil, case)
    forms = list(r2.forms)
    if r2.family is not None:
        forms = [f for _, f in r2.family.sample(samples, seed)]

    entries = []
    for f in forms:
        if isinstance(f, IntervalForm):
            entries.append((f, None, _numeric_line_check(S, pair, numeric.realize_interval_form(f))))
        else:
            g12, g21 = epipolar_lines(pair, f)
            entries.append((f, (g12, g21), permissible_check(S, (c1, c2), g12, g21)))

    exact_pairs = [lines for _, lines, _ in entries if lines is not None]
    injective = all(
        not (a[0] == b[0] and a[1] == b[1]) for i, a in enumerate(exact_pairs) for b in exact_pairs[i + 1 :]
    )
    own12, own21 = epipolar_lines(pair, fundamental_form(pair))
    return PermissibleCorrespondence(entries, own12 == own21, injective)


def _numeric_line_check(S: Quadric, pair: CameraPair, F: np.ndarray) -> NumericLineCheck:
    u, _, vt = np.linalg.svd(F)
    e1, e2 = u[:, -1], vt[-1]
    s = numeric.as_array(S.matrix)
    worst = 0.0
    cov = []
    for cam, e, c in ((pair.first, e1, pair.centers[0]), (pair.second, e2, pair.centers[1])):
        p = numeric.as_array(cam.matrix)
        ann = np.linalg.svd(e[None, :])[2][1:]
        rows = ann @ p
        cov.append(rows)
        pts = np.linalg.svd(rows)[2][2:]
        pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
        worst = max(worst, float(np.max(np.abs(pts @ s @ pts.T))) / np.linalg.norm(s))
        cf = np.array([float(v) for v in c])
        worst = max(worst, float(np.max(np.abs(rows @ cf))) / np.linalg.norm(cf))
    sv = np.linalg.svd(np.vstack(cov), compute_uv=False)
    return NumericLineCheck(worst, bool(sv[-1] / sv[0] > 1e-8))


# --------------------------------------------------------------------------
# curve types and divisor classes
# --------------------------------------------------------------------------


class CurveTypeError(ValueError):
    """The curve falls outside the hypotheses of the conjugation formula."""


@dataclass(frozen=True)
class CurveTypeQC:
    """Type ``(a, b, c1, c2)`` of a curve on a smooth quadric or a cone."""

    a: int
    b: int
    c1: int
    c2: int

    def __post_init__(self):
        if min(self.a, self.b, self.c1, self.c2) < 0:
            raise CurveTypeError(f"negative entry in curve type {tuple(self)}")

    def __iter__(self):
        return iter((self.a, self.b, self.c1, self.c2))


@dataclass(frozen=True)
class CurveTypePlanes:
    """Type ``(a, b, c0, c1, c2)`` of a curve on a pair of planes."""

    a: int
    b: int
    c0: int
    c1: int
    c2: int

    def __post_init__(self):
        if min(self.a, self.b, self.c0, self.c1, self.c2) < 0:
            raise CurveTypeError(f"negative entry in curve type {tuple(self)}")

    def __iter__(self):
        return iter((self.a, self.b, self.c0, self.c1, self.c2))


def curve_type_conjugate_quadric(t) -> CurveTypeQC:
    a, b, c1, c2 = t
    return CurveTypeQC(a, a + b - c1 - c2, a - c2, a - c1)


def curve_type_conjugate_planes(t) -> CurveTypePlanes:
    a, b, c0, c1, c2 = t
    return CurveTypePlanes(2 * a - c0 - c1 - c2, b, a - c1 - c2, a - c0 - c2, a - c0 - c1)


@dataclass(frozen=True)
class DivisorClass:
    """Integer combination of the basis classes of one case's surface."""

    kind: str
    coefficients: tuple[int, ...]

    def __add__(self, other):
        _same(self, other)
        return DivisorClass(self.kind, tuple(x + y for x, y in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        _same(self, other)
        return DivisorClass(self.kind, tuple(x - y for x, y in zip(self.coefficients, other.coefficients)))

    def __rmul__(self, k: int):
        return DivisorClass(self.kind, tuple(k * x for x in self.coefficients))

    def __mul__(self, other) -> int:
        """Intersection pairing."""
        _same(self, other)
        table = INTERSECTION_TABLES[self.kind]
        return sum(
            x * table[i][j] * y
            for i, x in enumerate(self.coefficients)
            for j, y in enumerate(other.coefficients)
        )


def _same(a: DivisorClass, b: DivisorClass):
    if a.kind != b.kind:
        raise ValueError("classes live on different surfaces")


BASIS_NAMES = {
    "smooth": ("L1", "L2", "E1", "E2"),
    "cone": ("L", "E0", "E1", "E2"),
    "planes": ("L", "E0", "E1", "E2"),
}

INTERSECTION_TABLES = {
    "smooth": ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)),
    "cone": ((0, 1, 0, 0), (1, -2, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)),
    "planes": ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)),
}

_HYPERPLANE = {
    "smooth": (2, 1, -1, -1),
    "cone": (3, 1, -1, -1),
    "planes": (2, -1, -1, -1),
}


def basis_class(kind: str, name: str) -> DivisorClass:
    names = BASIS_NAMES[kind]
    return DivisorClass(kind, tuple(int(n == name) for n in names))


def hyperplane_class(kind: str) -> DivisorClass:
    """Class of the pulled-back hyperplane section of the conjugate quadric."""
    if kind not in _HYPERPLANE:
        raise InvalidInputError(f"unknown surface kind {kind!r}")
    return DivisorClass(kind, _HYPERPLANE[kind])
