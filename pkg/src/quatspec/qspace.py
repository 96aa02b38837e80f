"""Right quaternionic vectors and operators on ``H^n``.

Conventions
-----------
Scalars act on vectors from the **right**: ``(x q)_m = x_m q``.  The
Hermitian scalar product is

    <x, y> = sum_m conj(y_m) x_m

so that ``<x p + y q, z> = <x, z> p + <y, z> q`` (scalars leave on the
right).  Many texts use the mirrored convention ``sum conj(x_m) y_m``;
mixing the two silently breaks the axioms above.

An operator is an ``n x n`` quaternion matrix acting by
``(T x)_k = sum_l T_kl x_l``; such a map is right linear.  Real scalars
multiply operators from the right, which coincides with the left since
reals are central.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ConvergenceError, DomainError
from .quaternion import Quaternion, qconj_array, qmul_array

DEFAULT_NORMAL_TOL = 1e-10

PROFILES = ("real", "generic", "clustered")


def _as_qarray(value, ndim: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != ndim or arr.shape[-1] != 4:
        raise DomainError(f"expected an array of shape {'(n, ' * (ndim - 1)}4), got {arr.shape}")
    return arr


def qmatmul(S: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Quaternion matrix product of ``(n, m, 4)`` and ``(m, p, 4)`` arrays."""
    a1, b1, c1, d1 = (S[..., r] for r in range(4))
    a2, b2, c2, d2 = (T[..., r] for r in range(4))
    return np.stack(
        [
            a1 @ a2 - b1 @ b2 - c1 @ c2 - d1 @ d2,
            a1 @ b2 + b1 @ a2 + c1 @ d2 - d1 @ c2,
            a1 @ c2 - b1 @ d2 + c1 @ a2 + d1 @ b2,
            a1 @ d2 + b1 @ c2 - c1 @ b2 + d1 @ a2,
        ],
        axis=-1,
    )


class QVector:
    """Element of the right quaternionic Hilbert space ``H^n``."""

    __slots__ = ("data",)

    def __init__(self, components):
        if isinstance(components, QVector):
            data = components.data.copy()
        else:
            comps = list(components) if not isinstance(components, np.ndarray) else components
            if len(comps) and isinstance(comps[0], Quaternion):
                comps = [q.to_list() for q in comps]
            data = _as_qarray(comps, 2).copy()
        if data.shape[0] < 1:
            raise DomainError("vector dimension must be at least 1")
        data.setflags(write=False)
        self.data = data

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __len__(self):
        return self.n

    def __getitem__(self, m) -> Quaternion:
        return Quaternion.from_array(self.data[m])

    def __add__(self, other: "QVector") -> "QVector":
        _check_dims(self.n, other.n)
        return QVector(self.data + other.data)

    def __sub__(self, other: "QVector") -> "QVector":
        _check_dims(self.n, other.n)
        return QVector(self.data - other.data)

    def __neg__(self):
        return QVector(-self.data)

    def rmul(self, q) -> "QVector":
        """Right scalar multiplication ``x q``."""
        q = Quaternion.coerce(q).to_array()
        return QVector(qmul_array(self.data, q))

    def __mul__(self, q):
        return self.rmul(q)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.data**2)))

    def allclose(self, other: "QVector", atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.max(np.abs(self.data - other.data)) <= atol)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": self.data.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "QVector":
        vec = cls(obj["entries"])
        if "n" in obj and int(obj["n"]) != vec.n:
            raise DomainError("declared n does not match number of entries")
        return vec

    @classmethod
    def basis(cls, n: int, m: int) -> "QVector":
        data = np.zeros((n, 4))
        data[m, 0] = 1.0
        return cls(data)

    def __repr__(self):
        return f"QVector(n={self.n})"


class QOperator:
    """Right linear operator on ``H^n`` stored as an ``(n, n, 4)`` array."""

    __slots__ = ("data",)

    def __init__(self, entries):
        if isinstance(entries, QOperator):
            data = entries.data.copy()
        else:
            if not isinstance(entries, np.ndarray):
                entries = [
                    [q.to_list() if isinstance(q, Quaternion) else q for q in row] for row in entries
                ]
            data = _as_qarray(entries, 3).copy()
        if data.shape[0] != data.shape[1]:
            raise DomainError(f"operator matrix must be square, got {data.shape[:2]}")
        if data.shape[0] < 1:
            raise DomainError("operator dimension must be at least 1")
        data.setflags(write=False)
        self.data = data

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "QOperator":
        data = np.zeros((n, n, 4))
        data[np.arange(n), np.arange(n), 0] = 1.0
        return cls(data)

    @classmethod
    def zeros(cls, n: int) -> "QOperator":
        return cls(np.zeros((n, n, 4)))

    @classmethod
    def diag(cls, values: Sequence) -> "QOperator":
        n = len(values)
        data = np.zeros((n, n, 4))
        for m, v in enumerate(values):
            data[m, m] = Quaternion.coerce(v).to_array()
        return cls(data)

    @classmethod
    def from_real(cls, matrix) -> "QOperator":
        matrix = np.asarray(matrix, dtype=float)
        data = np.zeros(matrix.shape + (4,))
        data[..., 0] = matrix
        return cls(data)

    @classmethod
    def from_columns(cls, columns: Sequence[QVector]) -> np.ndarray:
        """Stack column vectors into an ``(n, r, 4)`` array (not square in general)."""
        return np.stack([c.data for c in columns], axis=1)

    # -- basic algebra ----------------------------------------------------

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, idx) -> Quaternion:
        return Quaternion.from_array(self.data[idx])

    def __add__(self, other: "QOperator") -> "QOperator":
        _check_dims(self.n, other.n)
        return QOperator(self.data + other.data)

    def __sub__(self, other: "QOperator") -> "QOperator":
        _check_dims(self.n, other.n)
        return QOperator(self.data - other.data)

    def __neg__(self):
        return QOperator(-self.data)

    def __mul__(self, r):
        """Scale by a real number (``rT := Tr``)."""
        if isinstance(r, (QOperator, QVector, Quaternion)):
            return NotImplemented
        return QOperator(self.data * float(r))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, QOperator):
            return compose(self, other)
        if isinstance(other, QVector):
            return apply(self, other)
        return NotImplemented

    @property
    def H(self) -> "QOperator":
        return adjoint(self)

    def fro(self) -> float:
        return operator_norm_fro(self)

    def allclose(self, other: "QOperator", atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.max(np.abs(self.data - other.data)) <= atol)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": self.data.reshape(-1, 4).tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "QOperator":
        """Parse ``{"n": int, "entries": [...]}``; entries row-major, flat or nested."""
        if "entries" not in obj:
            raise DomainError("operator JSON lacks 'entries'")
        arr = np.asarray(obj["entries"], dtype=float)
        n = int(obj["n"]) if "n" in obj else int(round(math.sqrt(arr.size // 4)))
        if arr.size != n * n * 4 or arr.shape[-1] != 4:
            raise DomainError(f"expected {n * n} quaternion entries for n={n}")
        return cls(arr.reshape(n, n, 4))

    def __repr__(self):
        return f"QOperator(n={self.n})"


def _check_dims(n1: int, n2: int) -> None:
    if n1 != n2:
        raise DomainError(f"dimension mismatch: {n1} vs {n2}")


# ---------------------------------------------------------------------------
# scalar products


def inner(x: QVector, y: QVector) -> Quaternion:
    """Hermitian scalar product ``<x, y> = sum conj(y_m) x_m``."""
    _check_dims(x.n, y.n)
    return Quaternion.from_array(qmul_array(qconj_array(y.data), x.data).sum(axis=0))


def slice_inner(x: QVector, y: QVector, frame) -> Quaternion:
    """Slice scalar product ``Re<x,y> - Re(<x,y> i) i`` with values in ``C_i``.

    Equivalently the orthogonal projection of ``<x, y>`` onto the plane
    spanned by ``1`` and the frame's ``i``.
    """
    q = inner(x, y)
    u = frame.i
    # Re(q u) = -(imaginary part of q) . u
    coeff = float(q.vector @ u.vector)
    return Quaternion(q.a, coeff * u.b, coeff * u.c, coeff * u.d)


# ---------------------------------------------------------------------------
# operator algebra


def apply(T: QOperator, x: QVector) -> QVector:
    _check_dims(T.n, x.n)
    return QVector(qmatmul(T.data, x.data[:, None, :])[:, 0, :])


def compose(S: QOperator, T: QOperator) -> QOperator:
    """Operator product ``S T`` (apply ``T`` first)."""
    _check_dims(S.n, T.n)
    return QOperator(qmatmul(S.data, T.data))


def adjoint(T: QOperator) -> QOperator:
    """Quaternionic conjugate transpose."""
    return QOperator(qconj_array(np.swapaxes(T.data, 0, 1)))


def operator_norm_fro(T) -> float:
    """Frobenius norm ``sqrt(sum |T_kl|^2)``."""
    data = T.data if isinstance(T, (QOperator, QVector)) else np.asarray(T)
    return float(np.sqrt(np.sum(data**2)))


def normality_residual(T: QOperator) -> float:
    Ts = adjoint(T)
    return operator_norm_fro(compose(Ts, T) - compose(T, Ts))


def is_normal(T: QOperator, tol: float = DEFAULT_NORMAL_TOL) -> bool:
    """``||T*T - TT*||_F <= tol * ||T||_F^2``."""
    return normality_residual(T) <= tol * operator_norm_fro(T) ** 2


def sup_norm_lower_bound(T: QOperator, probes: int = 32, seed: int = 0) -> float:
    """Lower bound on the operator sup-norm from random unit probes.

    Diagnostic only; the library otherwise reports Frobenius norms.
    """
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(probes):
        x = QVector(rng.standard_normal((T.n, 4)))
        x = QVector(x.data / x.norm())
        best = max(best, apply(T, x).norm())
    return best


def q_operator(T: QOperator, q) -> QOperator:
    """``Q_q(T) = T^2 - 2 Re(q) T + |q|^2 I``."""
    q = Quaternion.coerce(q)
    modsq = q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d
    return compose(T, T) - T * (2.0 * q.a) + QOperator.identity(T.n) * modsq


# ---------------------------------------------------------------------------
# Gram-Schmidt and random generators


def project_out(v: np.ndarray, basis: Iterable[np.ndarray]) -> np.ndarray:
    for u in basis:
        coeff = qmul_array(qconj_array(u), v).sum(axis=0)  # <v, u>
        v = v - qmul_array(u, coeff)
    return v


def gram_schmidt(columns: np.ndarray, rank_tol: float = 1e-10, reorth: bool = True) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of an ``(n, r, 4)`` array.

    Coefficients multiply basis vectors from the right, as required in a
    right vector space.  Raises :class:`DomainError` if a column collapses
    below ``rank_tol`` relative to its original norm.
    """
    cols = np.asarray(columns, dtype=float)
    basis: list[np.ndarray] = []
    for r in range(cols.shape[1]):
        v = cols[:, r, :]
        n0 = float(np.sqrt(np.sum(v**2)))
        v = project_out(v, basis)
        if reorth:
            v = project_out(v, basis)
        nv = float(np.sqrt(np.sum(v**2)))
        if n0 == 0.0 or nv <= rank_tol * n0:
            raise DomainError(f"column {r} is numerically dependent (residual {nv:.3e})")
        basis.append(v / nv)
    return np.stack(basis, axis=1)


def random_qmatrix(rng: np.random.Generator, n: int, m: int | None = None) -> np.ndarray:
    return rng.standard_normal((n, n if m is None else m, 4))


def random_unitary(n: int, seed=None, max_retries: int = 8) -> QOperator:
    """Seeded random unitary via Gram-Schmidt on a Gaussian quaternion matrix."""
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(max_retries):
        try:
            return QOperator(gram_schmidt(random_qmatrix(rng, n)))
        except DomainError:
            continue
    raise ConvergenceError(f"Gram-Schmidt failed {max_retries} times for n={n}")


def _random_unit_vectors(rng, count: int) -> np.ndarray:
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _separated_spheres(rng, count: int, min_sep: float, real_fraction: float) -> np.ndarray:
    spheres: list[tuple[float, float]] = []
    while len(spheres) < count:
        re_ = rng.standard_normal()
        rad = 0.0 if rng.random() < real_fraction else 0.2 + abs(rng.standard_normal())
        if all(math.hypot(re_ - a, rad - b) >= min_sep for a, b in spheres):
            spheres.append((re_, rad))
    return np.array(spheres)


def random_spectrum(n: int, rng: np.random.Generator, profile: str = "generic") -> np.ndarray:
    """Diagonal entries ``(n, 4)`` for :func:`random_normal`.

    ``real``: real entries.  ``generic``: distinct spheres (about a quarter
    real) with random imaginary directions.  ``clustered``: few spheres,
    each repeated with different directions, giving multiplicity > 1.
    """
    if profile not in PROFILES:
        raise DomainError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    if profile == "real":
        spheres = _separated_spheres(rng, n, 0.05, 1.0)
    elif profile == "generic":
        spheres = _separated_spheres(rng, n, 0.05, 0.25)
    else:
        distinct = max(1, (n + 2) // 3)
        base = _separated_spheres(rng, distinct, 0.2, 0.25)
        spheres = base[rng.integers(0, distinct, size=n)]
        spheres[:distinct] = base
    dirs = _random_unit_vectors(rng, n)
    out = np.zeros((n, 4))
    out[:, 0] = spheres[:, 0]
    out[:, 1:] = spheres[:, 1:2] * dirs
    return out


def random_normal(n: int, seed=None, profile: str = "generic") -> QOperator:
    """Seeded random normal operator ``U D U*`` with ``D`` quaternion-diagonal."""
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = random_spectrum(n, rng, profile)
    U = random_unitary(n, rng)
    D = np.zeros((n, n, 4))
    D[np.arange(n), np.arange(n)] = d
    return compose(compose(U, QOperator(D)), adjoint(U))


def random_vector(n: int, rng: np.random.Generator) -> QVector:
    return QVector(rng.standard_normal((n, 4)))
