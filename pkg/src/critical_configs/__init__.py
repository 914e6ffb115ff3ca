"""Exact decision procedures for critical two-view configurations."""

from .camera import (
    Camera,
    CameraPair,
    CenterProjectionError,
    UndefinedError,
    camera_pair_from_form,
    canonical_pair,
    center,
    joint_image,
    on_baseline,
    project,
)
from .conjugate_maps import (
    CurveTypeError,
    CurveTypePlanes,
    CurveTypeQC,
    DivisorClass,
    PermissibleReport,
    SpaceLine,
    basis_class,
    conjugates_from_permissible,
    contains_baseline,
    curve_type_conjugate_planes,
    curve_type_conjugate_quadric,
    epipolar_line,
    epipolar_lines,
    hyperplane_class,
    permissible_check,
)
from .criticality import (
    BASELINE,
    CONJUGATE_AT_CENTER,
    EPIPOLAR_INTERSECTION,
    Configuration,
    ConjugateConfiguration,
    ConjugateReport,
    ConjugateUndefinedError,
    FiberIsALineError,
    NotACorrespondenceError,
    NotOnQuadricError,
    TrivialConjugateError,
    conjugate_configuration,
    is_critical,
    one_view_critical,
    one_view_span_dim,
    quadrics_through,
    triangulate,
    verify_same_images,
)
from .fundamental import BilinearForm, Epipole, epipole, fundamental_form, is_trivial_conjugate
from .pencil import (
    INFINITE,
    AppendixCase,
    CaseTag,
    CriticalClass,
    FormPencil,
    InvalidPencilError,
    Quadric,
    QuadricKind,
    classify_pencil,
    classify_quadric,
    criticality_verdict,
    form_line_from_quadric,
    pullback_quadric,
    rank2_forms_on_line,
)
from .polynomial import RootProfile, ZeroPolynomialError, binary_root_profile, cubic_root_profile
from .projective import InvalidInputError

__all__ = [name for name in dir() if not name.startswith("_")]
