"""Complex and quaternion arithmetic for swlag.

Complex values are plain Python ``complex`` (or numpy complex arrays for the
vectorised helpers). Values that may underflow are carried as
:class:`LogPolarValue`. Quaternions use the identification
``(z1, z2) <-> z1 + z2 J`` with ``I <-> i``; complex scalars act on the left.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .exceptions import BranchCutError, DomainError

_LOGGER = logging.getLogger(__name__)

ArrayLike = Union[complex, np.ndarray]


def wrap_angle(angle):
    """Normalize an angle (or array of angles) to (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2.0 * np.pi)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def require_finite(z: complex, name: str = "z") -> complex:
    """Reject NaN and infinite components at an API boundary."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class LogPolarValue:
    """A complex value stored as (log-modulus, argument).

    ``log_mod == -inf`` encodes an exact zero; ``arg`` is then unused.
    """

    log_mod: float
    arg: float

    @classmethod
    def from_complex(cls, z: complex) -> "LogPolarValue":
        """Build from an ordinary complex number."""
        z = require_finite(z)
        if z == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(z)), wrap_angle(cmath.phase(z)))

    @classmethod
    def from_parts(cls, log_mod: float, arg: float) -> "LogPolarValue":
        """Build from a log-modulus and an unnormalized argument."""
        if log_mod == -math.inf:
            return cls(-math.inf, 0.0)
        return cls(float(log_mod), wrap_angle(arg))

    @property
    def is_zero(self) -> bool:
        """Return True for the encoded exact zero."""
        return self.log_mod == -math.inf

    @property
    def modulus(self) -> float:
        """Return the modulus; underflows to 0.0 silently."""
        if self.is_zero:
            return 0.0
        return math.exp(self.log_mod)

    @property
    def unit(self) -> complex:
        """Return the unit phase e^{i arg}, defined even when the modulus underflows."""
        return cmath.rect(1.0, self.arg)

    def to_complex(self) -> complex:
        """Convert back to an ordinary complex number."""
        if self.is_zero:
            return 0j
        return cmath.rect(math.exp(self.log_mod), self.arg)


def s_power_principal(w: complex, s: float) -> complex:
    """Principal branch of w^s for 0 < s < 1, cut along (-inf, 0]."""
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    w = require_finite(w, "w")
    if w.imag == 0.0:
        if w.real <= 0.0:
            raise BranchCutError(f"w = {w!r} lies on the branch cut (-inf, 0]")
        return complex(w.real**s, 0.0)
    return cmath.exp(s * cmath.log(w))


def zero_location(k: int) -> float:
    """Return p_k = -1 + e^{-k}."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    return math.expm1(-k)


def blaschke_factor(z: ArrayLike, k: int) -> ArrayLike:
    """Return (z - p_k) / (1 - p_k z).

    Evaluated in the shifted variable t = z + 1 so that factors with large k
    keep their relative accuracy near z = -1. ``1 + p_k`` is exact in double
    precision, so the factor vanishes exactly at ``z = p_k``.
    """
    p = zero_location(k)
    delta = 1.0 + p
    t = np.asarray(z, dtype=complex) + 1.0
    value = (t - delta) / (delta - p * t)
    if np.ndim(value) == 0:
        return complex(value)
    return value


def mobius_factor(z: ArrayLike, a: complex) -> ArrayLike:
    """Return the general disc automorphism factor (z - a) / (1 - conj(a) z)."""
    z = np.asarray(z, dtype=complex)
    value = (z - a) / (1.0 - np.conj(a) * z)
    if np.ndim(value) == 0:
        return complex(value)
    return value


@dataclass(frozen=True)
class Quaternion:
    """Quaternion a + bI + cJ + dK."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_c2(cls, z1: complex, z2: complex) -> "Quaternion":
        """Map (z1, z2) in C^2 to z1 + z2 J."""
        z1, z2 = complex(z1), complex(z2)
        return cls(z1.real, z1.imag, z2.real, z2.imag)

    def to_c2(self) -> Tuple[complex, complex]:
        """Inverse of :meth:`from_c2`."""
        return complex(self.a, self.b), complex(self.c, self.d)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return self + (-other)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __abs__(self) -> float:
        return math.sqrt(self.a**2 + self.b**2 + self.c**2 + self.d**2)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        """Return the four real components."""
        return (self.a, self.b, self.c, self.d)


QUAT_ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
QUAT_I = Quaternion(0.0, 1.0, 0.0, 0.0)
QUAT_J = Quaternion(0.0, 0.0, 1.0, 0.0)
QUAT_K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a * b."""
    return a * b


def quat_apply_J(v: Quaternion) -> Quaternion:
    """Left-multiply by J; on C^2 this is (w1, w2) -> (-conj(w2), conj(w1))."""
    return QUAT_J * v


def complex_left_mul(c: complex, v: Quaternion) -> Quaternion:
    """Left-multiply by the complex scalar c = a + bI."""
    c = complex(c)
    return Quaternion(c.real, c.imag, 0.0, 0.0) * v


def c2_apply_J(w1: np.ndarray, w2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`quat_apply_J` on pairs of complex arrays."""
    return -np.conj(w2), np.conj(w1)


def c2_left_mul(
    c: np.ndarray, w1: np.ndarray, w2: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`complex_left_mul` on pairs of complex arrays."""
    return c * w1, c * w2
