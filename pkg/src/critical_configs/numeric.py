"""Floating-point realization of conjugates whose forms have irrational parameters.

Classification never comes through here.  Only after a root has been
isolated exactly do we refine it in floating point and build cameras and
points to check image equality against a tolerance.
"""

from __future__ import annotations

import numpy as np

from .pencil import IntervalForm

DEFAULT_TOLERANCE = 1e-9


def as_array(m) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m], dtype=float)


def realize_interval_form(form: IntervalForm, iterations: int = 8) -> np.ndarray:
    """Newton-refine ``t`` on ``det(t F0 + F_P)`` and project to rank 2."""
    cubic = form.pencil.det_cubic()
    lo, hi = form.interval
    f = [float(c) for c in cubic]

    def p(t):
        return f[0] * t**3 + f[1] * t**2 + f[2] * t + f[3]

    def dp(t):
        return 3 * f[0] * t**2 + 2 * f[1] * t + f[2]

    t = float((lo + hi) / 2)
    for _ in range(iterations):
        d = dp(t)
        if d == 0:
            break
        step = p(t) / d
        t -= step
        if abs(step) <= 1e-17 * max(1.0, abs(t)):
            break
    # guard: Newton must stay inside the exact bracket (up to rounding)
    if not (float(lo) - 1e-12 <= t <= float(hi) + 1e-12):
        t = float((lo + hi) / 2)
    m = t * as_array(form.pencil.generator.matrix) + as_array(form.pencil.base.matrix)
    return project_rank2(m)


def project_rank2(m: np.ndarray) -> np.ndarray:
    u, s, vt = np.linalg.svd(m)
    s[2] = 0.0
    return (u * s) @ vt


def cross_matrix(e: np.ndarray) -> np.ndarray:
    a, b, c = e
    return np.array([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])


def camera_pair_from_form(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Float counterpart of :func:`critical_configs.camera.camera_pair_from_form`."""
    _, _, vt = np.linalg.svd(F)
    e = vt[-1]
    p1 = np.hstack([np.eye(3), np.zeros((3, 1))])
    p2 = np.hstack([cross_matrix(e) @ F.T, e[:, None]])
    return p1, p2


def triangulate(p1: np.ndarray, p2: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a = np.vstack([cross_matrix(x) @ p1, cross_matrix(y) @ p2])
    _, _, vt = np.linalg.svd(a)
    return vt[-1]


def sine_residual(u, v) -> float:
    """Sine of the angle between two image vectors after max-abs scaling."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u = u / np.max(np.abs(u))
    v = v / np.max(np.abs(v))
    return float(np.linalg.norm(np.cross(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v)))


def form_residual(F: np.ndarray) -> tuple[float, float]:
    """``(|det F| / ||F||^3, sigma_2 / sigma_1)`` for checking rank-2 witnesses."""
    s = np.linalg.svd(F, compute_uv=False)
    return abs(np.linalg.det(F)) / s[0] ** 3, s[1] / s[0]
