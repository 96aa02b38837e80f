"""Quaternion arithmetic, imaginary units, slices and conjugacy classes.

A quaternion ``q = a + b i + c j + d k`` is stored as four real
coordinates in that order.  Products follow ``i^2 = j^2 = k^2 = ijk = -1``.
Besides the scalar :class:`Quaternion` type, the module exposes vectorised
helpers working on float arrays whose last axis has length 4; the operator
layer in :mod:`quatspec.qspace` is built on those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import DomainError

#: membership tolerance for the imaginary unit sphere
TAU_UNIT = 1e-10


@dataclass(frozen=True)
class Quaternion:
    """Immutable quaternion ``a + b i + c j + d k``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, arr: Iterable[float]) -> "Quaternion":
        a, b, c, d = (float(x) for x in arr)
        return cls(a, b, c, d)

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float, np.floating, np.integer)):
            return cls(float(value))
        return cls.from_array(value)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    def to_list(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]

    @property
    def vector(self) -> np.ndarray:
        """Imaginary part as a real 3-vector ``(b, c, d)``."""
        return np.array([self.b, self.c, self.d], dtype=float)

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        return mul(self, Quaternion.coerce(other))

    def __rmul__(self, other):
        return mul(Quaternion.coerce(other), self)

    def __truediv__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, inv(other))
        r = float(other)
        return Quaternion(self.a / r, self.b / r, self.c / r, self.d / r)

    def __abs__(self):
        return modulus(self)

    def __repr__(self):
        return f"Quaternion({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.a, -q.b, -q.c, -q.d)


def norm2(q: Quaternion) -> float:
    return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d


def modulus(q: Quaternion) -> float:
    return math.sqrt(norm2(q))


def re(q: Quaternion) -> float:
    return q.a


def im(q: Quaternion) -> Quaternion:
    return Quaternion(0.0, q.b, q.c, q.d)


def inv(q: Quaternion) -> Quaternion:
    """Multiplicative inverse ``conj(q) / |q|^2``."""
    n2 = norm2(q)
    if n2 == 0.0:
        raise DomainError("zero quaternion has no inverse")
    return Quaternion(q.a / n2, -q.b / n2, -q.c / n2, -q.d / n2)


def is_imaginary_unit(q: Quaternion, tol: float = TAU_UNIT) -> bool:
    return abs(q.a) <= tol and abs(modulus(q) - 1.0) <= tol


def imaginary_unit(value, tol: float = TAU_UNIT) -> Quaternion:
    """Validate that ``value`` lies in the sphere ``S = {q : q^2 = -1}``.

    Accepts a :class:`Quaternion` or a 3-vector ``(b, c, d)``.  No
    normalisation is performed.
    """
    if not isinstance(value, Quaternion):
        arr = np.asarray(value, dtype=float).ravel()
        if arr.size == 3:
            value = Quaternion(0.0, *arr)
        else:
            value = Quaternion.from_array(arr)
    if not is_imaginary_unit(value, tol):
        raise DomainError(f"{value!r} is not a unit imaginary quaternion")
    return value


@dataclass(frozen=True)
class EigenSphere:
    """The 2-sphere ``re + rad * S``; ``rad == 0`` is the real point ``re``."""

    re: float
    rad: float

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "rad", float(self.rad))
        if self.rad < 0:
            raise DomainError("sphere radius must be non-negative")

    def point(self, unit: Quaternion) -> Quaternion:
        return Quaternion(self.re, self.rad * unit.b, self.rad * unit.c, self.rad * unit.d)

    def contains(self, q: Quaternion, tol: float = TAU_UNIT) -> bool:
        return self.distance(conjugacy_class(q)) <= tol

    def distance(self, other: "EigenSphere") -> float:
        """Distance between the two spheres' points in the ``(re, rad)`` half-plane."""
        return math.hypot(self.re - other.re, self.rad - other.rad)

    def to_list(self) -> list[float]:
        return [self.re, self.rad]


def conjugacy_class(q: Quaternion) -> EigenSphere:
    """Return ``[q]`` as the sphere ``(Re q, |Im q|)``."""
    return EigenSphere(q.a, math.sqrt(q.b * q.b + q.c * q.c + q.d * q.d))


def conjugate_by(q: Quaternion, s: Quaternion) -> Quaternion:
    """Return ``s q s^{-1}``."""
    return mul(mul(s, q), inv(s))


@dataclass(frozen=True)
class SliceFrame:
    """Ordered anticommuting triple ``(i, j, k = ij)`` of imaginary units.

    The first unit selects the slice ``C_i``; the second completes the
    decomposition ``q = alpha + j beta`` with ``alpha, beta`` in ``C_i``.
    """

    i: Quaternion
    j: Quaternion
    k: Quaternion

    def __post_init__(self):
        for u in (self.i, self.j, self.k):
            imaginary_unit(u)
        if abs(float(self.i.vector @ self.j.vector)) > TAU_UNIT:
            raise DomainError("frame units i and j are not orthogonal")
        if modulus(mul(self.i, self.j) - self.k) > 10 * TAU_UNIT:
            raise DomainError("frame unit k differs from ij")

    @property
    def basis(self) -> np.ndarray:
        """3x3 array whose rows are the imaginary vectors of i, j, k."""
        return np.stack([self.i.vector, self.j.vector, self.k.vector])

    @classmethod
    def standard(cls) -> "SliceFrame":
        return cls(I, J, K)


_AXES = np.eye(3)


def complete_frame(unit) -> SliceFrame:
    """Extend an imaginary unit to a deterministic :class:`SliceFrame`.

    The helper axis is the coordinate axis least aligned with ``unit``
    (ties go to the later axis), so the standard ``i`` completes to the
    standard frame.
    """
    u = imaginary_unit(unit)
    v = u.vector
    align = np.abs(v)
    axis = int(len(align) - 1 - np.argmin(align[::-1]))
    e = _AXES[axis]
    w = np.cross(e, v)
    w = w / np.linalg.norm(w)
    j = Quaternion(0.0, *w)
    k = im(mul(u, j))
    return SliceFrame(u, j, k)


def conjugator(u, v) -> Quaternion:
    """Return a unit ``s`` with ``s^{-1} u s = v``."""
    u = imaginary_unit(u)
    v = imaginary_unit(v)
    w = u + v
    n = modulus(w)
    if n > TAU_UNIT:
        return w / n
    return complete_frame(u).j


# ---------------------------------------------------------------------------
# vectorised helpers on arrays with trailing axis of length 4


def qmul_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise Hamilton product of broadcastable ``(..., 4)`` arrays."""
    a1, b1, c1, d1 = np.moveaxis(np.asarray(p, dtype=float), -1, 0)
    a2, b2, c2, d2 = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def qconj_array(q: np.ndarray) -> np.ndarray:
    out = np.array(q, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out
