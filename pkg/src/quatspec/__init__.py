"""Spectral theory of normal operators on right quaternionic Hilbert spaces.

Finite-dimensional toolkit: quaternion arithmetic, operators on ``H^n``,
the slice complexification ``T -> T_i``, a Jacobi eigensolver, and the
quaternionic spectral measure of a normal operator together with the
``T = A + J B`` decomposition.
"""

from .exceptions import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    NotNormalError,
    RankError,
    StructureError,
)
from .quaternion import (
    EigenSphere,
    Quaternion,
    SliceFrame,
    complete_frame,
    conj,
    conjugacy_class,
    conjugate_by,
    conjugator,
    inv,
    modulus,
    mul,
)
from .qspace import (
    QOperator,
    QVector,
    adjoint,
    apply,
    compose,
    inner,
    is_normal,
    operator_norm_fro,
    q_operator,
    random_normal,
    random_unitary,
    slice_inner,
)
from .slices import chi, chi_vec, split, unchi
from .eig import EigDecomp, eig_hermitian, eig_normal, eigenprojection
from .spectral import (
    AxSymSet,
    QSpectralMeasure,
    SphericalSpectrum,
    TJB,
    Tolerances,
    evaluate,
    poly_apply,
    poly_on_sphere,
    q_residual,
    reconstruct,
    restrict,
    slice_measure,
    spectral_measure,
    spherical_spectrum,
    tjb_decompose,
)

__version__ = "0.1.0"
