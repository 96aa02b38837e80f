"""Spherical spectrum, quaternionic spectral measure and ``T = A + JB``.

Everything is computed on the slice route: ``T`` is mapped to the complex
matrix ``chi(T)`` of ``T_i``, that matrix is diagonalised, and the
eigenvalues ``a + b i`` are folded onto spheres ``(a, |b|)``.  The
projection of a sphere collects the eigenvectors of both ``a + |b| i`` and
its conjugate; such a symmetric selection always descends to a
quaternionic operator, whereas a one-sided selection does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from . import eig
from .exceptions import ConsistencyError, DomainError, NotNormalError, RankError
from .qspace import (
    QOperator,
    QVector,
    adjoint,
    compose,
    inner,
    normality_residual,
    operator_norm_fro,
    project_out,
    q_operator,
    qmatmul,
)
from .quaternion import EigenSphere, Quaternion, SliceFrame, conjugacy_class, qconj_array
from .slices import chi, unchi

#: real bivariate polynomial ``{(i, j): c}`` meaning ``sum c X^i Y^j``
Poly = Mapping[tuple[int, int], float]


@dataclass(frozen=True)
class Tolerances:
    """Tolerance bundle; ``sphere`` is relative to ``||T||_F``.

    ``normal`` is relative to ``||T||_F^2``, ``eig`` / ``struct`` / ``rec``
    relative to the Frobenius norm of the matrix at hand, ``meas`` absolute
    (projections have unit scale).
    """

    normal: float = 1e-10
    eig: float = 1e-10
    cluster: float = 1e-7
    sphere: float = 1e-7
    struct: float = 1e-8
    meas: float = 1e-8
    rec: float = 1e-8

    def with_(self, **kw) -> "Tolerances":
        kw = {k: v for k, v in kw.items() if v is not None}
        for k, v in kw.items():
            if not v > 0:
                raise DomainError(f"tolerance {k} must be positive, got {v}")
        return replace(self, **kw)


DEFAULT_TOL = Tolerances()


def _tol(tol) -> Tolerances:
    if tol is None:
        return DEFAULT_TOL
    if isinstance(tol, Tolerances):
        return tol
    return DEFAULT_TOL.with_(normal=float(tol))


def _frame(frame) -> SliceFrame:
    return SliceFrame.standard() if frame is None else frame


def require_normal(T: QOperator, tol=None) -> float:
    """Raise :class:`NotNormalError` unless ``T`` is normal; return the residual."""
    res = normality_residual(T)
    if res > _tol(tol).normal * operator_norm_fro(T) ** 2:
        raise NotNormalError(res)
    return res


# ---------------------------------------------------------------------------
# slice analysis shared by the spectrum and the measure


def _single_linkage(points: np.ndarray, thresh: float) -> np.ndarray:
    """Cluster labels for single-linkage grouping at distance ``<= thresh``."""
    m = len(points)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    d = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(-1))
    for a in range(m):
        for b in range(a + 1, m):
            if d[a, b] <= thresh:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    roots = [find(a) for a in range(m)]
    relabel: dict[int, int] = {}
    return np.array([relabel.setdefault(r, len(relabel)) for r in roots])


@dataclass
class _SliceAnalysis:
    dec: eig.EigDecomp
    spheres: list  # list of (EigenSphere, multiplicity)
    members: list  # per sphere: indices into dec.lambdas
    frame: SliceFrame
    scale: float


def _analyse(T: QOperator, frame, tol: Tolerances) -> _SliceAnalysis:
    require_normal(T, tol)
    frame = _frame(frame)
    scale = operator_norm_fro(T)
    M = chi(T, frame)
    dec = eig.eig_normal(M, tol=tol.eig, cluster_tol=tol.cluster)
    pts = np.column_stack([dec.lambdas.real, np.abs(dec.lambdas.imag)])
    thresh = tol.sphere * scale
    labels = _single_linkage(pts, thresh)
    found = []
    for lab in range(labels.max() + 1):
        idx = np.flatnonzero(labels == lab)
        re_, rad = pts[idx].mean(axis=0)
        if rad <= thresh:
            rad = 0.0
        if len(idx) % 2:
            raise ConsistencyError(
                f"sphere ({re_:.6g}, {rad:.6g}) has odd complex multiplicity {len(idx)}; "
                "the slice matrix spectrum must be conjugate-paired"
            )
        found.append((EigenSphere(float(re_), float(rad)), len(idx) // 2, idx))
    found.sort(key=lambda t: (t[0].re, t[0].rad))
    return _SliceAnalysis(
        dec,
        [(s, mult) for s, mult, _ in found],
        [idx for _, _, idx in found],
        frame,
        scale,
    )


# ---------------------------------------------------------------------------
# spherical spectrum


@dataclass
class SphericalSpectrum:
    """``sigma_S(T)`` as a finite union of eigenspheres with multiplicities.

    Multiplicity is the quaternionic dimension of the eigensphere's
    spectral subspace, so multiplicities sum to ``n``.
    """

    spheres: list
    scale: float = 1.0

    def __iter__(self):
        return iter(self.spheres)

    def __len__(self):
        return len(self.spheres)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.spheres)

    def distance(self, q) -> float:
        """Half-plane distance from ``[q]`` to the nearest eigensphere."""
        cls = q if isinstance(q, EigenSphere) else conjugacy_class(Quaternion.coerce(q))
        return min(s.distance(cls) for s, _ in self.spheres)

    def contains(self, q, tol: float = 1e-7) -> bool:
        return self.distance(q) <= tol * max(self.scale, 1.0)

    def to_json(self) -> list:
        return [[s.re, s.rad, m] for s, m in self.spheres]


def spherical_spectrum(T: QOperator, frame=None, tol=None) -> SphericalSpectrum:
    """Spherical spectrum of a normal operator via ``sigma(T_i) = sigma_S(T) ∩ C_i``."""
    an = _analyse(T, frame, _tol(tol))
    return SphericalSpectrum(an.spheres, an.scale)


def q_residual(T: QOperator, q) -> float:
    """Smallest singular value of ``Q_q(T)``; zero exactly on ``sigma_S(T)``.

    Computed from the Hermitian matrix ``[[0, M], [M^H, 0]]`` with
    ``M = chi(Q_q(T))``, whose eigenvalues are ``±`` the singular values
    of ``M``; this keeps full absolute accuracy near zero, which the
    Gram matrix ``M^H M`` would square away.
    """
    M = chi(q_operator(T, q))
    m = M.shape[0]
    Z = np.zeros((2 * m, 2 * m), dtype=complex)
    Z[:m, m:] = M
    Z[m:, :m] = M.conj().T
    dec = eig.eig_hermitian(Z)
    return float(np.min(np.abs(dec.lambdas.real)))


# ---------------------------------------------------------------------------
# slice (complex) spectral measure


@dataclass
class SliceAtom:
    """Eigenvalue cluster of ``T_i`` in ``C_i`` and its complex projection."""

    value: complex
    indices: np.ndarray
    projection: np.ndarray


def slice_measure(T: QOperator, frame=None, tol=None) -> list[SliceAtom]:
    """Complex spectral measure of ``T_i``: one projection per eigenvalue cluster."""
    tol = _tol(tol)
    an = _analyse(T, frame, tol)
    lam = an.dec.lambdas
    labels = _single_linkage(np.column_stack([lam.real, lam.imag]), tol.sphere * an.scale)
    atoms = []
    for lab in range(labels.max() + 1):
        idx = np.flatnonzero(labels == lab)
        atoms.append(SliceAtom(complex(lam[idx].mean()), idx, eig.eigenprojection(an.dec, idx)))
    atoms.sort(key=lambda a: (a.value.real, a.value.imag))
    return atoms


# ---------------------------------------------------------------------------
# axially symmetric sets


@dataclass(frozen=True)
class AxSymSet:
    """Finite union of closed rectangles in the half-plane ``{(re, rad): rad >= 0}``.

    A quaternion ``q`` belongs to the set iff ``(Re q, |Im q|)`` lies in one
    of the rectangles, so membership is constant on every sphere ``[q]``.
    Rectangles are ``(re_lo, re_hi, rad_lo, rad_hi)``.
    """

    rects: tuple = ()

    @classmethod
    def everything(cls) -> "AxSymSet":
        return cls(((-math.inf, math.inf, 0.0, math.inf),))

    @classmethod
    def empty(cls) -> "AxSymSet":
        return cls(())

    @classmethod
    def box(cls, re_lo, re_hi, rad_lo=0.0, rad_hi=math.inf) -> "AxSymSet":
        return cls(((float(re_lo), float(re_hi), float(rad_lo), float(rad_hi)),))

    @classmethod
    def around(cls, spheres: Iterable[EigenSphere], radius: float) -> "AxSymSet":
        """Union of square neighbourhoods of the given spheres."""
        return cls(
            tuple(
                (s.re - radius, s.re + radius, max(s.rad - radius, 0.0), s.rad + radius)
                for s in spheres
            )
        )

    def contains_point(self, re_: float, rad: float) -> bool:
        return any(a <= re_ <= b and c <= rad <= d for a, b, c, d in self.rects)

    def contains(self, q) -> bool:
        s = q if isinstance(q, EigenSphere) else conjugacy_class(Quaternion.coerce(q))
        return self.contains_point(s.re, s.rad)

    __contains__ = contains

    def __or__(self, other: "AxSymSet") -> "AxSymSet":
        return AxSymSet(self.rects + other.rects)

    def __and__(self, other: "AxSymSet") -> "AxSymSet":
        out = []
        for a1, b1, c1, d1 in self.rects:
            for a2, b2, c2, d2 in other.rects:
                a, b, c, d = max(a1, a2), min(b1, b2), max(c1, c2), min(d1, d2)
                if a <= b and c <= d:
                    out.append((a, b, c, d))
        return AxSymSet(tuple(out))


# ---------------------------------------------------------------------------
# quaternionic spectral measure


@dataclass
class Atom:
    sphere: EigenSphere
    multiplicity: int
    projection: QOperator


@dataclass
class QSpectralMeasure:
    """Atomic projection-valued measure on axially symmetric sets."""

    atoms: list
    frame: SliceFrame
    n: int
    scale: float = 1.0

    @property
    def spheres(self) -> list:
        return [a.sphere for a in self.atoms]

    def evaluate(self, omega: AxSymSet) -> QOperator:
        return evaluate(self, omega)

    def __call__(self, omega: AxSymSet) -> QOperator:
        return evaluate(self, omega)

    def axiom_residuals(self) -> dict:
        """Worst deviations from the projection-valued measure axioms."""
        I = QOperator.identity(self.n)
        idem = selfadj = orth = 0.0
        total = QOperator.zeros(self.n)
        for k, a in enumerate(self.atoms):
            P = a.projection
            idem = max(idem, operator_norm_fro(compose(P, P) - P))
            selfadj = max(selfadj, operator_norm_fro(adjoint(P) - P))
            for b in self.atoms[k + 1 :]:
                orth = max(orth, operator_norm_fro(compose(P, b.projection)))
            total = total + P
        return {
            "idempotence": idem,
            "self_adjointness": selfadj,
            "orthogonality": orth,
            "completeness": operator_norm_fro(total - I),
        }

    def to_json(self) -> dict:
        return {
            "frame": [self.frame.i.vector.tolist(), self.frame.j.vector.tolist()],
            "atoms": [
                {
                    "sphere": [a.sphere.re, a.sphere.rad],
                    "multiplicity": a.multiplicity,
                    "projection": a.projection.to_json(),
                }
                for a in self.atoms
            ],
        }


def spectral_measure(T: QOperator, frame=None, tol=None) -> QSpectralMeasure:
    """Quaternionic spectral measure ``E(Omega) = E^i(Omega ∩ C_i)``."""
    tol = _tol(tol)
    an = _analyse(T, frame, tol)
    atoms = []
    for (sphere, mult), idx in zip(an.spheres, an.members):
        P = eig.eigenprojection(an.dec, idx)
        atoms.append(Atom(sphere, mult, unchi(P, an.frame, tol.struct)))
    return QSpectralMeasure(atoms, an.frame, T.n, an.scale)


def evaluate(E: QSpectralMeasure, omega: AxSymSet) -> QOperator:
    """``E(Omega)``: sum of atom projections whose sphere lies in ``Omega``."""
    out = np.zeros((E.n, E.n, 4))
    for a in E.atoms:
        if omega.contains(a.sphere):
            out = out + a.projection.data
    return QOperator(out)


# ---------------------------------------------------------------------------
# T = A + J B


@dataclass
class TJB:
    """``T = A + J B``: ``A`` self-adjoint, ``B`` positive, ``J`` anti-self-adjoint."""

    A: QOperator
    B: QOperator
    J: QOperator

    def residuals(self, T: QOperator) -> dict:
        N = (T - adjoint(T)) * 0.5
        JsJ = compose(adjoint(self.J), self.J)
        return {
            "A_self_adjoint": operator_norm_fro(adjoint(self.A) - self.A),
            "B_self_adjoint": operator_norm_fro(adjoint(self.B) - self.B),
            "J_anti_self_adjoint": operator_norm_fro(adjoint(self.J) + self.J),
            "JA_commute": operator_norm_fro(compose(self.J, self.A) - compose(self.A, self.J)),
            "JB_commute": operator_norm_fro(compose(self.J, self.B) - compose(self.B, self.J)),
            "imaginary_part": operator_norm_fro(N - compose(self.J, self.B)),
            "JsJ_idempotent": operator_norm_fro(compose(JsJ, JsJ) - JsJ),
            "JsJ_range_B": operator_norm_fro(compose(JsJ, self.B) - self.B),
            "sum": operator_norm_fro(self.A + compose(self.J, self.B) - T),
        }

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "B": self.B.to_json(), "J": self.J.to_json()}


def tjb_decompose(T: QOperator, frame=None, tol=None, measure: QSpectralMeasure | None = None) -> TJB:
    """``A = (T + T*)/2``, ``B = sum rad_k P_k``, ``J = N B^+`` with ``N = (T - T*)/2``.

    ``J`` vanishes on the kernel of ``B``.
    """
    E = spectral_measure(T, frame, tol) if measure is None else measure
    Ts = adjoint(T)
    A = (T + Ts) * 0.5
    N = (T - Ts) * 0.5
    n = T.n
    B = np.zeros((n, n, 4))
    Bplus = np.zeros((n, n, 4))
    for a in E.atoms:
        if a.sphere.rad > 0.0:
            B = B + a.projection.data * a.sphere.rad
            Bplus = Bplus + a.projection.data / a.sphere.rad
    return TJB(A, QOperator(B), compose(N, QOperator(Bplus)))


def reconstruct(E: QSpectralMeasure, J: QOperator) -> QOperator:
    """``sum_k P_k re_k + J P_k rad_k``."""
    out = np.zeros((E.n, E.n, 4))
    for a in E.atoms:
        out = out + a.projection.data * a.sphere.re
        if a.sphere.rad != 0.0:
            out = out + compose(J, a.projection).data * a.sphere.rad
    return QOperator(out)


def probe_identity(T: QOperator, E: QSpectralMeasure, J: QOperator, x: QVector, y: QVector) -> tuple:
    """Both sides of ``<Tx, y> = sum re_k <P_k x, y> + rad_k <P_k J x, y>``."""
    lhs = inner(T @ x, y)
    Jx = J @ x
    rhs = Quaternion()
    for a in E.atoms:
        rhs = rhs + inner(a.projection @ x, y) * a.sphere.re
        rhs = rhs + inner(a.projection @ Jx, y) * a.sphere.rad
    return lhs, rhs


# ---------------------------------------------------------------------------
# polynomials in T and T*


def poly_apply(T: QOperator, P: Poly) -> QOperator:
    """``p(T) = sum c_ab T^a (T*)^b``; for normal ``T`` the factor order is immaterial."""
    n = T.n
    if not P:
        return QOperator.zeros(n)
    max_a = max(a for a, _ in P)
    max_b = max(b for _, b in P)
    powT = [QOperator.identity(n)]
    for _ in range(max_a):
        powT.append(compose(powT[-1], T))
    Ts = adjoint(T)
    powS = [QOperator.identity(n)]
    for _ in range(max_b):
        powS.append(compose(powS[-1], Ts))
    out = np.zeros((n, n, 4))
    for (a, b), c in sorted(P.items()):
        if c:
            out = out + compose(powT[a], powS[b]).data * float(c)
    return QOperator(out)


def poly_value(P: Poly, lam: complex) -> complex:
    """``p(lambda) = sum c_ab lambda^a conj(lambda)^b``."""
    return complex(sum(float(c) * lam**a * lam.conjugate() ** b for (a, b), c in P.items()))


def poly_on_sphere(P: Poly, sphere: EigenSphere, frame=None) -> float:
    """``|p(lambda)|`` for ``lambda = re + rad i``; the same for every point of the sphere."""
    return abs(poly_value(P, complex(sphere.re, sphere.rad)))


def random_poly(rng: np.random.Generator, degree: int = 3) -> dict:
    """Random real bivariate polynomial of total degree ``<= degree``."""
    return {
        (a, b): float(rng.standard_normal())
        for a in range(degree + 1)
        for b in range(degree + 1 - a)
    }


# ---------------------------------------------------------------------------
# restriction to a spectral subspace


def range_basis(P: QOperator, rank_tol: float = 1e-6) -> np.ndarray:
    """Orthonormal quaternionic basis (``(n, r, 4)``) of the range of a projection.

    Column-pivoted Gram-Schmidt: the column with largest residual norm is
    taken next.  For an orthogonal projection of rank ``r`` the residuals
    stay at least ``1/sqrt(n)`` for ``r`` steps and drop to rounding level
    afterwards, so the rank is cross-checked against ``Re tr P``.
    """
    n = P.n
    expected = int(round(float(np.trace(P.data[..., 0]))))
    cols = [P.data[:, c, :] for c in range(n)]
    basis: list[np.ndarray] = []
    pivots: list[float] = []
    while cols:
        res = [float(np.sqrt(np.sum(v**2))) for v in cols]
        best = int(np.argmax(res))
        pivots.append(res[best])
        if res[best] <= rank_tol:
            break
        u = project_out(cols.pop(best), basis)
        u = u / np.sqrt(np.sum(u**2))
        basis.append(u)
        cols = [project_out(v, [u]) for v in cols]
    if len(basis) != expected:
        raise RankError(
            f"rank detection failed: Gram-Schmidt found {len(basis)} columns, "
            f"trace suggests {expected}; pivot residuals {np.array(pivots)}"
        )
    if not basis:
        return np.zeros((n, 0, 4))
    return np.stack(basis, axis=1)


def compress(T: QOperator, Q: np.ndarray) -> QOperator:
    """``Q* T Q`` for an ``(n, r, 4)`` array ``Q`` with orthonormal columns."""
    Qs = qconj_array(np.swapaxes(Q, 0, 1))
    return QOperator(qmatmul(qmatmul(Qs, T.data), Q))


def restrict(T: QOperator, P: QOperator, tol=None) -> QOperator:
    """Compression of ``T`` to the range of a projection commuting with it."""
    tol = _tol(tol)
    comm = operator_norm_fro(compose(P, T) - compose(T, P))
    if comm > tol.meas * max(operator_norm_fro(T), 1.0):
        raise DomainError(f"projection does not commute with T (||PT - TP||_F = {comm:.3e})")
    Q = range_basis(P)
    if Q.shape[1] == 0:
        raise RankError("projection has rank zero; nothing to restrict to")
    return compress(T, Q)
