"""Complexification of ``H^n`` over a slice ``C_i``.

Fix a frame ``(i, j, k)``.  Every quaternion splits uniquely as
``q = alpha + j beta`` with ``alpha, beta`` in ``C_i``, and a vector
``x`` in ``H^n`` has complex coordinates ``(c, d)`` in the orthonormal
basis ``e_1, ..., e_n, e_1 j, ..., e_n j`` of ``H_i``.  In that basis an
operator with blocks ``T = A1 + j A2`` is represented by

    chi(T) = [[A1, -conj(A2)],
              [A2,  conj(A1)]]

Complex numbers of ``C_i`` are stored as Python/numpy complex numbers
whose imaginary unit stands for the frame's ``i``.
"""

from __future__ import annotations

import numpy as np

from .exceptions import StructureError
from .qspace import QOperator, QVector
from .quaternion import Quaternion, SliceFrame

DEFAULT_STRUCT_TOL = 1e-8

_STANDARD = SliceFrame.standard()


def _frame(frame) -> SliceFrame:
    return _STANDARD if frame is None else frame


def _frame_coords(data: np.ndarray, frame: SliceFrame) -> np.ndarray:
    """Rewrite ``(..., 4)`` quaternion coordinates in the frame basis ``1, i, j, k``."""
    out = np.empty_like(data, dtype=float)
    out[..., 0] = data[..., 0]
    out[..., 1:] = data[..., 1:] @ frame.basis.T
    return out


def _std_coords(coords: np.ndarray, frame: SliceFrame) -> np.ndarray:
    out = np.empty_like(coords, dtype=float)
    out[..., 0] = coords[..., 0]
    out[..., 1:] = coords[..., 1:] @ frame.basis
    return out


def _split_array(data: np.ndarray, frame: SliceFrame) -> tuple[np.ndarray, np.ndarray]:
    f = _frame_coords(data, frame)
    # q = x0 + x1 i + x2 j + x3 k = (x0 + x1 i) + j (x2 - x3 i)
    alpha = f[..., 0] + 1j * f[..., 1]
    beta = f[..., 2] - 1j * f[..., 3]
    return alpha, beta


def _join_array(alpha: np.ndarray, beta: np.ndarray, frame: SliceFrame) -> np.ndarray:
    f = np.stack([alpha.real, alpha.imag, beta.real, -beta.imag], axis=-1)
    return _std_coords(f, frame)


def split(q, frame=None) -> tuple[complex, complex]:
    """Return ``(alpha, beta)`` in ``C_i`` with ``q = alpha + j beta``."""
    alpha, beta = _split_array(Quaternion.coerce(q).to_array(), _frame(frame))
    return complex(alpha), complex(beta)


def join(alpha: complex, beta: complex, frame=None) -> Quaternion:
    """Inverse of :func:`split`."""
    arr = _join_array(np.asarray(alpha, dtype=complex), np.asarray(beta, dtype=complex), _frame(frame))
    return Quaternion.from_array(arr)


def chi(T: QOperator, frame=None) -> np.ndarray:
    """Complex ``2n x 2n`` matrix of ``T_i`` in the basis ``{e_m, e_m j}``."""
    A1, A2 = _split_array(T.data, _frame(frame))
    return np.block([[A1, -A2.conj()], [A2, A1.conj()]])


def chi_vec(x: QVector, frame=None) -> np.ndarray:
    """Complex coordinates ``(c, d)`` of ``x`` with ``x_m = c_m + j d_m``."""
    c, d = _split_array(x.data, _frame(frame))
    return np.concatenate([c, d])


def unchi_vec(v: np.ndarray, frame=None) -> QVector:
    n = v.shape[0] // 2
    return QVector(_join_array(v[:n], v[n:], _frame(frame)))


def structure_defect(M: np.ndarray) -> float:
    """Frobenius distance of ``M`` from the quaternionic block pattern."""
    M = np.asarray(M, dtype=complex)
    m = M.shape[0]
    if M.shape != (m, m) or m % 2:
        raise StructureError(f"expected an even square matrix, got shape {M.shape}")
    n = m // 2
    M11, M12, M21, M22 = M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]
    return float(np.sqrt(np.linalg.norm(M22 - M11.conj()) ** 2 + np.linalg.norm(M12 + M21.conj()) ** 2))


def is_quaternionic(M: np.ndarray, tol: float = DEFAULT_STRUCT_TOL) -> bool:
    return structure_defect(M) <= tol * np.linalg.norm(M)


def unchi(M: np.ndarray, frame=None, tol: float = DEFAULT_STRUCT_TOL) -> QOperator:
    """Recover the quaternionic operator whose slice matrix is ``M``.

    Raises
    ------
    StructureError
        If ``M`` deviates from the block pattern by more than
        ``tol * ||M||_F``, i.e. ``M`` commutes with no right
        multiplication by ``j`` and is not quaternionic-linear.
    """
    M = np.asarray(M, dtype=complex)
    defect = structure_defect(M)
    scale = float(np.linalg.norm(M))
    if defect > tol * scale:
        raise StructureError(
            "matrix is not quaternionic-linear for this frame "
            f"(defect {defect:.3e} > {tol:.1e} * {scale:.3e})"
        )
    n = M.shape[0] // 2
    A1 = 0.5 * (M[:n, :n] + M[n:, n:].conj())
    A2 = 0.5 * (M[n:, :n] - M[:n, n:].conj())
    return QOperator(_join_array(A1, A2, _frame(frame)))
