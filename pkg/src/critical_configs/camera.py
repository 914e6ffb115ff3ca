"""Projective cameras, their centers, and the joint camera map of a pair."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .projective import (
    InvalidInputError,
    Matrix,
    Vector,
    cross_matrix,
    is_zero,
    mat,
    matmul,
    matvec,
    nullspace,
    proj_equal,
    rank,
    transpose,
    vec,
)


class UndefinedError(ValueError):
    """An operation was asked for a value the geometry leaves undefined."""


class CenterProjectionError(UndefinedError):
    """A camera was asked to project its own center."""


@dataclass(frozen=True)
class Camera:
    """A full-rank 3x4 camera matrix over the rationals."""

    matrix: Matrix

    def __post_init__(self):
        m = mat(self.matrix)
        if len(m) != 3 or len(m[0]) != 4:
            raise InvalidInputError("a camera is a 3x4 matrix")
        if rank(m) != 3:
            raise InvalidInputError("camera matrix must have full rank")
        object.__setattr__(self, "matrix", m)

    @property
    def center(self) -> Vector:
        return center(self)


@dataclass(frozen=True)
class CameraPair:
    first: Camera
    second: Camera

    def __post_init__(self):
        if proj_equal(center(self.first), center(self.second)):
            raise InvalidInputError("camera centers must be distinct")

    @property
    def cameras(self) -> tuple[Camera, Camera]:
        return self.first, self.second

    @property
    def centers(self) -> tuple[Vector, Vector]:
        return center(self.first), center(self.second)

    @classmethod
    def from_matrices(cls, p1, p2) -> CameraPair:
        return cls(Camera(p1), Camera(p2))


def canonical_pair() -> CameraPair:
    """The pair ``[I | 0]`` and the camera dropping the third coordinate."""
    p1 = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    p2 = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))
    return CameraPair.from_matrices(p1, p2)


def center(P: Camera) -> Vector:
    (c,) = nullspace(P.matrix)
    return c


def project(P: Camera, x) -> Vector:
    x = vec(x)
    if len(x) != 4 or is_zero(x):
        raise InvalidInputError("space points are nonzero 4-vectors")
    y = matvec(P.matrix, x)
    if is_zero(y):
        raise CenterProjectionError("projection is undefined at the camera center")
    return y


def joint_image(pair: CameraPair, x) -> tuple[Vector, Vector]:
    return project(pair.first, x), project(pair.second, x)


def on_baseline(pair: CameraPair, x) -> bool:
    c1, c2 = pair.centers
    return rank((c1, c2, vec(x))) == 2


def camera_pair_from_form(F) -> CameraPair:
    """A canonical camera pair whose fundamental form is ``F``.

    Forms are read as ``x^T F y`` with ``x`` in the first image.  The first
    camera is ``[I | 0]``; the second is ``[[e]_x F^T | e]`` where ``e``
    spans the right kernel of ``F`` (the epipole in the second image).  Any
    other realization differs from this one by a projective change of
    coordinates in space.
    """
    m = mat(getattr(F, "matrix", F))
    if len(m) != 3 or len(m[0]) != 3:
        raise InvalidInputError("a bilinear form is a 3x3 matrix")
    if rank(m) != 2:
        raise InvalidInputError("not a fundamental form: rank must be 2")
    (e,) = nullspace(m)
    block = matmul(cross_matrix(e), transpose(m))
    p1 = tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(3))
    p2 = tuple(row + (e[i],) for i, row in enumerate(block))
    return CameraPair(Camera(p1), Camera(p2))

