"""Fundamental forms of camera pairs and their epipoles."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .camera import CameraPair, center, project
from .projective import (
    InvalidInputError,
    Matrix,
    Vector,
    det,
    dot,
    is_zero,
    left_nullspace,
    mat,
    matvec,
    normalize_matrix,
    nullspace,
    proj_equal,
    rank,
    vec,
)


@dataclass(frozen=True)
class BilinearForm:
    """A nonzero 3x3 form ``(x, y) -> x^T M y`` on image 1 x image 2."""

    matrix: Matrix

    def __post_init__(self):
        m = mat(self.matrix)
        if len(m) != 3 or len(m[0]) != 3:
            raise InvalidInputError("a bilinear form is a 3x3 matrix")
        if is_zero(m):
            raise InvalidInputError("the zero form is not a point of the form space")
        object.__setattr__(self, "matrix", m)

    @cached_property
    def rank(self) -> int:
        return rank(self.matrix)

    def __call__(self, x, y):
        return dot(vec(x), matvec(self.matrix, vec(y)))

    def right_kernel(self) -> list[Vector]:
        return nullspace(self.matrix)

    def left_kernel(self) -> list[Vector]:
        return left_nullspace(self.matrix)

    def normalized(self) -> BilinearForm:
        return BilinearForm(normalize_matrix(self.matrix))

    def __eq__(self, other):
        # projective equality; hashing is not provided on purpose
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return proj_equal(self.matrix, other.matrix)

    __hash__ = None


@dataclass(frozen=True)
class Epipole:
    point: Vector
    which_image: int
    which_center: int


def _drop(rows, i):
    return tuple(r for k, r in enumerate(rows) if k != i)


def fundamental_form(pair: CameraPair) -> BilinearForm:
    """The form vanishing exactly on corresponding image pairs.

    Entry ``(i, j)`` is the cofactor of ``x_i y_j`` in the 6x6 determinant
    ``det [[P1, x, 0], [P2, 0, y]]``.  The result is scaled so that its
    first nonzero entry (row-major) is 1.
    """
    p1, p2 = pair.first.matrix, pair.second.matrix
    m = tuple(
        tuple((-1) ** (i + j) * det(_drop(p1, i) + _drop(p2, j)) for j in range(3))
        for i in range(3)
    )
    return BilinearForm(normalize_matrix(m))


def epipole(pair: CameraPair, i: int, j: int) -> Epipole:
    """Image of camera ``j``'s center in image ``i`` (1-based)."""
    if {i, j} != {1, 2}:
        raise InvalidInputError("epipole indices must be 1 and 2 in some order")
    cams = pair.cameras
    return Epipole(project(cams[i - 1], center(cams[j - 1])), which_image=i, which_center=j)


def is_trivial_conjugate(F_P: BilinearForm, F_Q: BilinearForm) -> bool:
    return proj_equal(F_P.matrix, F_Q.matrix)
