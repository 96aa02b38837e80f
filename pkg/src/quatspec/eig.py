"""Eigendecomposition of complex Hermitian and normal matrices.

Hermitian matrices are diagonalised by cyclic Jacobi with complex
rotations.  Sweeps use the round-robin ("tournament") ordering: each
round rotates ``m/2`` disjoint index pairs at once, and ``m - 1`` rounds
visit every pair exactly once.  Normal matrices are reduced to two
commuting Hermitian problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import numpy as np

from .exceptions import ConsistencyError, ConvergenceError, DomainError

DEFAULT_EIG_TOL = 1e-10
CLUSTER_TOL = 1e-7
MAX_SWEEPS = 50
_CONVERGED = 1e-15


@dataclass
class EigDecomp:
    """``M U = U diag(lambdas)`` with ``U`` unitary.

    Attributes
    ----------
    U : ndarray, complex (m, m)
    lambdas : ndarray, complex (m,)
        Sorted by real part, then imaginary part.
    sweeps : int
        Jacobi sweeps spent (summed over stages for normal input).
    off_history : list of float
        Off-diagonal Frobenius mass after each sweep of the main stage.
    """

    U: np.ndarray
    lambdas: np.ndarray
    sweeps: int = 0
    off_history: list = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.U.shape[0]

    def residual(self, M: np.ndarray) -> float:
        return float(np.linalg.norm(M @ self.U - self.U * self.lambdas))

    def unitarity(self) -> float:
        return float(np.linalg.norm(self.U.conj().T @ self.U - np.eye(self.m)))


def _off(A: np.ndarray) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


@lru_cache(maxsize=None)
def _round_robin(m: int) -> tuple:
    """Disjoint pairings covering all ``m(m-1)/2`` pairs in ``m - 1`` rounds."""
    size = m + (m % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for t in range(size // 2):
            a, b = players[t], players[size - 1 - t]
            if a < m and b < m:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi(H: np.ndarray, max_sweeps: int = MAX_SWEEPS):
    """Core cyclic Jacobi; returns diagonal, eigenvectors, sweeps, off history."""
    A = np.array(H, dtype=complex, copy=True)
    A = 0.5 * (A + A.conj().T)
    m = A.shape[0]
    V = np.eye(m, dtype=complex)
    scale = float(np.linalg.norm(A))
    history: list[float] = []
    if m == 1 or scale == 0.0:
        return A.diagonal().real.copy(), V, 0, history
    rounds = _round_robin(m)
    eye = np.eye(m, dtype=complex)
    tiny = np.finfo(float).tiny
    sweeps = 0
    off = _off(A)
    while off > _CONVERGED * scale:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {off:.3e}, scale {scale:.3e})"
            )
        for ps, qs in rounds:
            apq = A[ps, qs]
            r = np.abs(apq)
            active = r > tiny
            if not active.all():
                if not active.any():
                    continue
                ps, qs, apq, r = ps[active], qs[active], apq[active], r[active]
            phase = apq / r
            theta = (A[qs, qs].real - A[ps, ps].real) / (2.0 * r)
            t = np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.hypot(t, 1.0)
            s_ = t * c
            G = eye.copy()
            G[ps, ps] = c
            G[qs, qs] = c
            G[ps, qs] = s_ * phase
            G[qs, ps] = -s_ * phase.conj()
            A = G.conj().T @ A @ G
            A[ps, qs] = 0.0
            A[qs, ps] = 0.0
            V = V @ G
        A = 0.5 * (A + A.conj().T)
        sweeps += 1
        off = _off(A)
        history.append(off)
    return A.diagonal().real.copy(), V, sweeps, history


def _hermitian_defect(H: np.ndarray) -> float:
    return float(np.linalg.norm(H - H.conj().T))


def eig_hermitian(H, tol: float = DEFAULT_EIG_TOL, max_sweeps: int = MAX_SWEEPS) -> EigDecomp:
    """Diagonalise a Hermitian matrix by cyclic Jacobi.

    Eigenvalues are returned in ascending order (as complex numbers with
    zero imaginary part, to share :class:`EigDecomp` with the normal case).
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {H.shape}")
    scale = float(np.linalg.norm(H))
    if _hermitian_defect(H) > tol * scale:
        raise DomainError(f"matrix is not Hermitian (defect {_hermitian_defect(H):.3e})")
    w, V, sweeps, history = _jacobi(H, max_sweeps)
    order = np.argsort(w, kind="stable")
    return EigDecomp(V[:, order], w[order].astype(complex), sweeps, history)


def _clusters(values: np.ndarray, gap: float) -> list[np.ndarray]:
    """Group sorted real values whose consecutive gaps are below ``gap``."""
    groups, start = [], 0
    for t in range(1, len(values) + 1):
        if t == len(values) or values[t] - values[t - 1] >= gap:
            groups.append(np.arange(start, t))
            start = t
    return groups


def eig_normal(M, tol: float = DEFAULT_EIG_TOL, cluster_tol: float = CLUSTER_TOL) -> EigDecomp:
    """Diagonalise a normal matrix through its commuting Hermitian parts.

    ``M = H1 + i H2`` with ``H1 = (M + M^H)/2`` and ``H2 = (M - M^H)/(2i)``.
    ``H1`` is diagonalised first; ``H2`` is then diagonalised inside every
    cluster of ``H1`` eigenvalues closer than ``cluster_tol * ||M||_F``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {M.shape}")
    m = M.shape[0]
    scale = float(np.linalg.norm(M))
    Mh = M.conj().T
    defect = float(np.linalg.norm(M @ Mh - Mh @ M))
    if defect > tol * scale**2:
        raise DomainError(f"matrix is not normal (||MM^H - M^HM||_F = {defect:.3e})")
    H1 = 0.5 * (M + Mh)
    H2 = -0.5j * (M - Mh)
    w1, V1, sweeps, history = _jacobi(H1)
    order = np.argsort(w1, kind="stable")
    w1, V1 = w1[order], V1[:, order]

    U = V1.copy()
    keys = np.empty((m, 2))
    for label, idx in enumerate(_clusters(w1, cluster_tol * scale)):
        block = V1[:, idx]
        if len(idx) > 1:
            C = block.conj().T @ H2 @ block
            w2, W, s2, _ = _jacobi(C)
            sweeps += s2
            sub = np.argsort(w2, kind="stable")
            U[:, idx] = block @ W[:, sub]
            keys[idx, 1] = w2[sub]
        else:
            keys[idx, 1] = (block.conj().T @ H2 @ block).real.ravel()
        keys[idx, 0] = label

    lambdas = np.einsum("ij,ik,kj->j", U.conj(), M, U)
    order = np.lexsort((keys[:, 1], keys[:, 0]))
    dec = EigDecomp(U[:, order], lambdas[order], sweeps, history)
    res = dec.residual(M)
    if res > tol * max(scale, np.finfo(float).tiny) and scale > 0:
        raise ConsistencyError(
            f"normal eigensolver residual {res:.3e} exceeds {tol:.1e} * ||M||_F; "
            "eigenvalues of the Hermitian part may be clustered below the threshold"
        )
    return dec


def eigenprojection(dec: EigDecomp, select) -> np.ndarray:
    """Orthogonal projection onto the span of the selected eigenvectors.

    ``select`` is either a predicate on the eigenvalue index or a
    boolean/integer index array.
    """
    if callable(select):
        mask = np.array([bool(select(t)) for t in range(dec.m)], dtype=bool)
    else:
        sel = np.asarray(select)
        if sel.dtype == bool:
            mask = sel
        else:
            mask = np.zeros(dec.m, dtype=bool)
            mask[sel.astype(int)] = True
    W = dec.U[:, mask]
    return W @ W.conj().T
