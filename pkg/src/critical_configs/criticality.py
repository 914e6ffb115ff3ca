"""End-to-end criticality decisions for two views, plus the one-view test."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import numeric
from .camera import Camera, CameraPair, UndefinedError, camera_pair_from_form, center, joint_image, on_baseline
from .fundamental import BilinearForm, fundamental_form
from .pencil import (
    AppendixCase,
    CriticalClass,
    IntervalForm,
    Quadric,
    classify_pencil,
    criticality_verdict,
    form_line_from_quadric,
    pullback_quadric,
    rank2_forms_on_line,
)
from .projective import (
    InvalidInputError,
    Vector,
    cross_matrix,
    matmul,
    nullspace,
    proj_equal,
    rank,
    vec,
)

log = logging.getLogger(__name__)

FAMILY_GRID_SIZE = 20


class NotOnQuadricError(InvalidInputError):
    pass


class TrivialConjugateError(InvalidInputError):
    pass


class NotACorrespondenceError(InvalidInputError):
    pass


class FiberIsALineError(UndefinedError):
    """Both images are the epipoles, so every point of the baseline fits."""


class ConjugateUndefinedError(UndefinedError):
    pass


# flags attached to individual points of a configuration
BASELINE = "baseline"
EPIPOLAR_INTERSECTION = "epipolar-intersection"
CONJUGATE_AT_CENTER = "conjugate-at-center"


@dataclass(frozen=True)
class Configuration:
    pair: CameraPair
    points: tuple[Vector, ...]

    def __post_init__(self):
        pts = tuple(vec(x) for x in self.points)
        c1, c2 = self.pair.centers
        for k, x in enumerate(pts):
            if len(x) != 4 or all(v == 0 for v in x):
                raise InvalidInputError(f"point {k} is not a nonzero 4-vector")
            if proj_equal(x, c1) or proj_equal(x, c2):
                raise InvalidInputError(f"point {k} coincides with a camera center")
        object.__setattr__(self, "points", pts)


# --------------------------------------------------------------------------
# quadrics through a point set
# --------------------------------------------------------------------------

_MONOMIALS = [(i, j) for i in range(4) for j in range(i, 4)]


def quadrics_through(points: Sequence, centers: Sequence) -> list[Quadric]:
    """Basis of the quadrics through every point and both centers.

    One linear condition per point on the ten coefficients; the basis comes
    from the reduced echelon form of that system.
    """
    pts = [vec(x) for x in itertools.chain(centers, points)]
    rows = tuple(tuple(x[i] * x[j] for i, j in _MONOMIALS) for x in pts)
    basis = nullspace(rows, ncols=len(_MONOMIALS))
    out = []
    for b in basis:
        terms = {mono: c for mono, c in zip(_MONOMIALS, b) if c != 0}
        out.append(Quadric.from_monomials(terms))
    return out


def _family_members(basis: list[Quadric]) -> list[Quadric]:
    members = list(basis)
    if len(basis) < 2:
        return members
    # deterministic grid of small integer combinations
    k = 0
    while len(members) < len(basis) + FAMILY_GRID_SIZE:
        k += 1
        cs = [(k * (i + 1) ** 2 + i) % 7 - 3 for i in range(len(basis))]
        m = [[sum(c * q.matrix[r][s] for c, q in zip(cs, basis)) for s in range(4)] for r in range(4)]
        if all(v == 0 for row in m for v in row):
            continue
        members.append(Quadric(tuple(tuple(r) for r in m)))
    return members


# --------------------------------------------------------------------------
# triangulation and conjugates
# --------------------------------------------------------------------------


def triangulate(pair: CameraPair, images, form: BilinearForm | None = None) -> Vector:
    """The unique space point with the given joint image (exact).

    ``form`` may pass in the pair's fundamental form (up to scale) to skip
    recomputing it for every point.
    """
    x, y = (vec(v) for v in images)
    F = form if form is not None else fundamental_form(pair)
    if F(x, y) != 0:
        raise NotACorrespondenceError("images violate the epipolar constraint")
    a = matmul(cross_matrix(x), pair.first.matrix) + matmul(cross_matrix(y), pair.second.matrix)
    sol = nullspace(a)
    if len(sol) != 1:
        raise FiberIsALineError("back-projected lines coincide: the fiber is the baseline")
    return sol[0]


@dataclass(frozen=True)
class ConjugateConfiguration:
    """Conjugate cameras and points; ``points[k]`` is ``None`` when ``flags`` has ``k``."""

    pair: CameraPair
    form: BilinearForm
    points: tuple[Vector | None, ...]
    flags: dict = field(default_factory=dict)

    @property
    def defined(self) -> list[int]:
        return [k for k, y in enumerate(self.points) if y is not None]


def conjugate_configuration(config: Configuration, F_Q, strict: bool = False) -> ConjugateConfiguration:
    """Cameras realizing ``F_Q`` and, for each point, its conjugate.

    Points on the baseline of the original pair, on the intersection of the
    two epipolar lines, or on one epipolar line (whose conjugate would be a
    camera center) get a flag instead of a conjugate.  With ``strict`` the
    last two raise :class:`ConjugateUndefinedError`.
    """
    F_Q = F_Q if isinstance(F_Q, BilinearForm) else BilinearForm(F_Q)
    if F_Q.rank != 2:
        raise InvalidInputError("conjugate form must have rank 2")
    pair = config.pair
    if F_Q == fundamental_form(pair):
        raise TrivialConjugateError("form equals the pair's own fundamental form; conjugate is trivial")
    S = pullback_quadric(F_Q, pair)
    for k, x in enumerate(config.points):
        if S(x) != 0:
            raise NotOnQuadricError(f"point {k} is not on the critical quadric")
    qpair = camera_pair_from_form(F_Q)
    (e1,) = F_Q.left_kernel()
    (e2,) = F_Q.right_kernel()
    q1, q2 = qpair.centers
    ys: list = []
    flags = {}
    for k, x in enumerate(config.points):
        if on_baseline(pair, x):
            log.warning("point %d lies on the baseline; its conjugate is not unique", k)
            flags[k] = BASELINE
            ys.append(None)
            continue
        u, v = joint_image(pair, x)
        if proj_equal(u, e1) and proj_equal(v, e2):
            if strict:
                raise ConjugateUndefinedError(f"conjugate undefined: point {k} on contracted line")
            flags[k] = EPIPOLAR_INTERSECTION
            ys.append(None)
            continue
        y = triangulate(qpair, (u, v), F_Q)
        if proj_equal(y, q1) or proj_equal(y, q2):
            if strict:
                raise ConjugateUndefinedError(f"point {k} lies on an epipolar line; conjugate is a camera center")
            flags[k] = CONJUGATE_AT_CENTER
            ys.append(None)
            continue
        ys.append(y)
    return ConjugateConfiguration(qpair, F_Q, tuple(ys), flags)


# --------------------------------------------------------------------------
# image comparison
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ImageReport:
    matches: tuple  # True / False per point, None where undefined
    residuals: tuple  # float per point (0.0 in exact mode), None where undefined
    mode: str

    @property
    def all_match(self) -> bool:
        return all(m is not False for m in self.matches)

    @property
    def mismatched(self) -> list[int]:
        return [k for k, m in enumerate(self.matches) if m is False]


def _images_float(cams, x):
    return [np.asarray(c, dtype=float) @ np.asarray(x, dtype=float) for c in cams]


def verify_same_images(a, b, mode: str | float = "exact") -> ImageReport:
    """Compare joint images point by point.

    ``a`` and ``b`` are :class:`Configuration`, :class:`ConjugateConfiguration`,
    or ``(cameras, points)`` with float arrays.  ``mode`` is ``"exact"`` or a
    tolerance on the sine residual.
    """
    pa, xa = _unpack(a)
    pb, xb = _unpack(b)
    if len(xa) != len(xb):
        raise InvalidInputError("configurations have different point counts")
    exact = mode == "exact"
    if exact and not (isinstance(pa, CameraPair) and isinstance(pb, CameraPair)):
        raise InvalidInputError("exact comparison needs exact configurations")
    tol = None if exact else float(mode)
    matches, residuals = [], []
    for x, y in zip(xa, xb):
        if x is None or y is None:
            matches.append(None)
            residuals.append(None)
            continue
        if exact:
            try:
                ia, ib = joint_image(pa, x), joint_image(pb, y)
            except UndefinedError:
                matches.append(False)
                residuals.append(None)
                continue
            ok = proj_equal(ia[0], ib[0]) and proj_equal(ia[1], ib[1])
            matches.append(ok)
            residuals.append(0.0 if ok else 1.0)
        else:
            ia = _images_float(_float_cams(pa), _float_vec(x))
            ib = _images_float(_float_cams(pb), _float_vec(y))
            r = max(numeric.sine_residual(u, v) for u, v in zip(ia, ib))
            matches.append(bool(r < tol))
            residuals.append(r)
    return ImageReport(tuple(matches), tuple(residuals), "exact" if exact else f"tolerance {tol:g}")


def _unpack(c):
    if isinstance(c, (Configuration, ConjugateConfiguration)):
        return c.pair, list(c.points)
    cams, pts = c
    return cams, list(pts)


def _float_cams(p):
    if isinstance(p, CameraPair):
        return [numeric.as_array(p.first.matrix), numeric.as_array(p.second.matrix)]
    return [np.asarray(m, dtype=float) for m in p]


def _float_vec(x):
    return np.array([float(v) for v in x])


# --------------------------------------------------------------------------
# the full decision
# --------------------------------------------------------------------------


@dataclass
class Conjugate:
    """One conjugate reconstruction as reported by :func:`is_critical`."""

    mode: str  # "exact" or "numeric"
    form: object  # BilinearForm, or a float array in numeric mode
    pair: object  # CameraPair, or (P1, P2) float arrays
    points: list
    flags: dict
    residual: float = 0.0
    parameter: tuple | None = None


@dataclass
class ConjugateReport:
    original: Configuration
    status: str  # "critical", "not critical" or "undetermined"
    verdict: CriticalClass | None
    case: AppendixCase | None
    quadric: Quadric | None
    family_dimension: int
    conjugates: list[Conjugate] = field(default_factory=list)
    trivial_flag: bool = False
    warnings: list[str] = field(default_factory=list)

    @property
    def critical(self) -> bool:
        return self.status == "critical"


def realize_conjugates(
    config: Configuration,
    S: Quadric,
    case: AppendixCase,
    samples: int = 5,
    seed: int | None = None,
    tolerance: float = numeric.DEFAULT_TOLERANCE,
) -> list[Conjugate]:
    """Build and verify every conjugate (or ``samples`` of them when infinitely many)."""
    r2 = rank2_forms_on_line(case.pencil, case)
    out = []
    if r2.family is not None:
        for param, form in r2.family.sample(samples, seed):
            out.append(_exact_conjugate(config, form, param))
        return out
    for form in r2.forms:
        if isinstance(form, BilinearForm):
            out.append(_exact_conjugate(config, form))
        else:
            out.append(_numeric_conjugate(config, form, tolerance))
    return out


def _exact_conjugate(config, form, param=None) -> Conjugate:
    conj = conjugate_configuration(config, form)
    report = verify_same_images(config, conj)
    if not report.all_match:
        raise AssertionError("exact conjugate does not reproduce the images")
    return Conjugate("exact", form, conj.pair, list(conj.points), conj.flags, 0.0, param)


def _numeric_conjugate(config: Configuration, form: IntervalForm, tolerance: float) -> Conjugate:
    F = numeric.realize_interval_form(form)
    q1, q2 = numeric.camera_pair_from_form(F)
    ys, flags = [], {}
    worst = 0.0
    for k, x in enumerate(config.points):
        if on_baseline(config.pair, x):
            flags[k] = BASELINE
            ys.append(None)
            continue
        u, v = (np.array([float(c) for c in w]) for w in joint_image(config.pair, x))
        y = numeric.triangulate(q1, q2, u, v)
        # a conjugate at (numerically) a Q-center means the point sat on an epipolar line
        if min(np.linalg.norm(q1 @ y), np.linalg.norm(q2 @ y)) < 1e-12 * np.linalg.norm(y):
            flags[k] = CONJUGATE_AT_CENTER
            ys.append(None)
            continue
        ys.append(y)
        worst = max(worst, numeric.sine_residual(u, q1 @ y), numeric.sine_residual(v, q2 @ y))
    if worst >= tolerance:
        log.warning("numeric conjugate residual %.3g exceeds tolerance %.3g", worst, tolerance)
    return Conjugate("numeric", F, (q1, q2), ys, flags, worst, form.interval)


def is_critical(
    config: Configuration,
    samples: int = 5,
    seed: int | None = None,
    tolerance: float = numeric.DEFAULT_TOLERANCE,
    build_conjugates: bool = True,
) -> ConjugateReport:
    """Decide criticality through the quadrics containing the points and centers.

    With a single quadric the answer is definite.  A family of dimension two
    or more is searched over its basis and a fixed grid of combinations;
    failing to find a witness there yields ``"undetermined"``.
    """
    basis = quadrics_through(config.points, config.pair.centers)
    warnings = [f"point {k} lies on the baseline" for k, x in enumerate(config.points) if on_baseline(config.pair, x)]
    if not basis:
        return ConjugateReport(config, "not critical", None, None, None, 0, warnings=warnings)
    first = None
    for S in _family_members(basis):
        case = classify_pencil(form_line_from_quadric(S, config.pair))
        verdict = criticality_verdict(case)
        first = first or (S, case, verdict)
        if verdict.critical:
            report = ConjugateReport(config, "critical", verdict, case, S, len(basis), warnings=warnings)
            if build_conjugates:
                report.conjugates = realize_conjugates(config, S, case, samples, seed, tolerance)
                report.trivial_flag = _any_trivial(config, report.conjugates)
                for c in report.conjugates:
                    for k, why in c.flags.items():
                        report.warnings.append(f"point {k}: {why}")
            return report
    S, case, verdict = first
    status = "not critical" if len(basis) == 1 else "undetermined"
    return ConjugateReport(config, status, verdict, case, S, len(basis), warnings=warnings)


def _any_trivial(config, conjugates) -> bool:
    F_P = fundamental_form(config.pair)
    exact = [c.form for c in conjugates if c.mode == "exact"]
    if any(f == F_P for f in exact):
        return True
    return any(a == b for a, b in itertools.combinations(exact, 2))


# --------------------------------------------------------------------------
# one view
# --------------------------------------------------------------------------


def one_view_span_dim(P: Camera, points: Sequence) -> int:
    """Projective dimension of the span of the center and the points."""
    return rank((center(P),) + tuple(vec(x) for x in points)) - 1


def one_view_critical(P: Camera, points: Sequence) -> bool:
    pts = [vec(x) for x in points]
    c = center(P)
    if any(proj_equal(x, c) for x in pts):
        raise InvalidInputError("points must differ from the camera center")
    if len(pts) <= 1:
        return False
    return one_view_span_dim(P, pts) < len(pts)
