"""The maps mu_j, nu_j, u, v, Phi = (u, -conj(v)) and the Schoen-Wolfson cones.

Derivatives are analytic: with W = phi'/phi, a function of the form
exp(a G + i b arg phi) has Wirtinger derivatives f (a+b)/2 W and
f (a-b)/2 conj(W).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from .const import SAFE_BOUNDARY_DISTANCE, SAFE_ZERO_DISTANCE
from .cx_core import require_finite
from .exceptions import DomainError
from .holo import DampedBlaschke, HoloArrays, evaluate_array
from .models import SurfaceSample

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MapParams:
    """Singularity index j and the holomorphic function phi."""

    j: int
    phi: DampedBlaschke

    def __post_init__(self) -> None:
        if self.j < 1:
            raise DomainError(f"j must be a positive integer, got {self.j}")

    @property
    def alpha(self) -> float:
        """Return sqrt(j^2 + j)."""
        return math.sqrt(self.j * self.j + self.j)

    @property
    def v_prefactor(self) -> complex:
        """Return i sqrt(j/(j+1))."""
        return 1j * math.sqrt(self.j / (self.j + 1))


@dataclass(frozen=True)
class ConeParams:
    """Coprime exponents of the cone Sigma_{p,q}."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise DomainError(f"p and q must be positive, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"p and q must be coprime, got ({self.p}, {self.q})")

    @property
    def gamma(self) -> float:
        """Return the homogeneity degree sqrt(pq)."""
        return math.sqrt(self.p * self.q)


class WirtingerValue(NamedTuple):
    """A value with its d/dz and d/dzbar derivatives (scalars or arrays)."""

    value: complex
    dz: complex
    dzbar: complex

    @property
    def dx(self):
        """Return d/dx = d/dz + d/dzbar."""
        return self.dz + self.dzbar

    @property
    def dy(self):
        """Return d/dy = i (d/dz - d/dzbar)."""
        return 1j * (self.dz - self.dzbar)


class SurfaceFrame(NamedTuple):
    """Vectorised Phi with first derivatives, angle and conformal factor."""

    z: np.ndarray
    Phi1: np.ndarray
    Phi2: np.ndarray
    dx1: np.ndarray
    dx2: np.ndarray
    dy1: np.ndarray
    dy2: np.ndarray
    angle: np.ndarray
    conf_factor: np.ndarray

    def sample(self, index: int) -> SurfaceSample:
        """Extract one SurfaceSample."""
        conf = float(self.conf_factor.flat[index])
        angle = complex(self.angle.flat[index]) if conf > 0 else None
        Phi1, Phi2 = complex(self.Phi1.flat[index]), complex(self.Phi2.flat[index])
        dx1, dx2 = complex(self.dx1.flat[index]), complex(self.dx2.flat[index])
        dy1, dy2 = complex(self.dy1.flat[index]), complex(self.dy2.flat[index])
        return SurfaceSample(
            z=complex(self.z.flat[index]),
            Phi=(Phi1.real, Phi1.imag, Phi2.real, Phi2.imag),
            angle=angle,
            conf_factor=conf,
            jac=(
                (dx1.real, dx1.imag, dx2.real, dx2.imag),
                (dy1.real, dy1.imag, dy2.real, dy2.imag),
            ),
        )

    @property
    def position(self) -> np.ndarray:
        """Return Phi as an (..., 4) real array."""
        return np.stack(
            [self.Phi1.real, self.Phi1.imag, self.Phi2.real, self.Phi2.imag], axis=-1
        )


def _radial_power(x: np.ndarray, exponent: float, degree: int) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    r = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(r > 0, r ** (exponent - degree) * x**degree, 0j)
    return value


def mu(j: int, x):
    """Return |x|^{alpha - j} x^j with alpha = sqrt(j^2 + j); 0 maps to 0."""
    value = _radial_power(x, math.sqrt(j * j + j), j)
    return complex(value) if np.ndim(value) == 0 else value


def nu(j: int, x):
    """Return |x|^{alpha - (j+1)} x^{j+1}; 0 maps to 0."""
    value = _radial_power(x, math.sqrt(j * j + j), j + 1)
    return complex(value) if np.ndim(value) == 0 else value


def _power_of_phi(
    holo: HoloArrays, modulus_exponent: float, phase_exponent: int, prefactor: complex = 1.0
) -> WirtingerValue:
    """Return prefactor * rho^a g^b with its Wirtinger derivatives."""
    with np.errstate(under="ignore", invalid="ignore"):
        value = prefactor * np.exp(modulus_exponent * holo.G + 1j * phase_exponent * holo.arg)
        value = np.where(holo.zero_mask, 0j, value)
        W = np.where(holo.zero_mask, 0j, holo.log_deriv)
        dz = value * (0.5 * (modulus_exponent + phase_exponent)) * W
        dzbar = value * (0.5 * (modulus_exponent - phase_exponent)) * np.conj(W)
    return WirtingerValue(value, dz, dzbar)


def u_arrays(params: MapParams, z, holo: HoloArrays = None) -> WirtingerValue:
    """Vectorised u = rho^alpha g^j."""
    if holo is None:
        holo = evaluate_array(params.phi, z)
    return _power_of_phi(holo, params.alpha, params.j)


def v_arrays(params: MapParams, z, holo: HoloArrays = None) -> WirtingerValue:
    """Vectorised v = i sqrt(j/(j+1)) rho^alpha g^{j+1}."""
    if holo is None:
        holo = evaluate_array(params.phi, z)
    return _power_of_phi(holo, params.alpha, params.j + 1, params.v_prefactor)


def _scalar(w: WirtingerValue) -> WirtingerValue:
    return WirtingerValue(complex(w.value[0]), complex(w.dz[0]), complex(w.dzbar[0]))


def _check_interior(z: complex) -> complex:
    z = require_finite(z)
    if abs(z) >= 1.0:
        raise DomainError(f"z must lie in the open unit disc, got {z!r}")
    return z


def u_eval(params: MapParams, z: complex) -> WirtingerValue:
    """Return u(z) with d/dz and d/dzbar; zeros of phi give (0, 0, 0)."""
    z = _check_interior(z)
    return _scalar(u_arrays(params, np.array([z])))


def v_eval(params: MapParams, z: complex) -> WirtingerValue:
    """Return v(z) with d/dz and d/dzbar; v vanishes at every zero of phi."""
    z = _check_interior(z)
    return _scalar(v_arrays(params, np.array([z])))


def lagrangian_angle(dx1, dx2, dy1, dy2, conf_factor):
    """Return (dz1 ^ dz2)(d_x, d_y) / conf_factor, NaN where conf_factor vanishes."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(conf_factor > 0, (dx1 * dy2 - dx2 * dy1) / conf_factor, np.nan + 0j)


def surface_arrays(params: MapParams, z) -> SurfaceFrame:
    """Evaluate Phi = (u, -conj(v)) and its frame on an array of points."""
    z = np.asarray(z, dtype=complex)
    holo = evaluate_array(params.phi, z)
    u = u_arrays(params, z, holo)
    v = v_arrays(params, z, holo)
    dx1, dy1 = u.dx, u.dy
    dx2, dy2 = -np.conj(v.dx), -np.conj(v.dy)
    conf = np.abs(dx1) ** 2 + np.abs(dx2) ** 2
    return SurfaceFrame(
        z=z,
        Phi1=u.value,
        Phi2=-np.conj(v.value),
        dx1=dx1,
        dx2=dx2,
        dy1=dy1,
        dy2=dy2,
        angle=lagrangian_angle(dx1, dx2, dy1, dy2, conf),
        conf_factor=conf,
    )


def surface(params: MapParams, z: complex) -> SurfaceSample:
    """Evaluate one SurfaceSample; the angle is None where conf_factor = 0."""
    z = _check_interior(z)
    return surface_arrays(params, np.array([z])).sample(0)


def phase_arrays(params: MapParams, z) -> np.ndarray:
    """Return g = phi/|phi| on an array of points (NaN at zeros)."""
    holo = evaluate_array(params.phi, z, with_log_deriv=False)
    return np.where(holo.zero_mask, np.nan + 0j, np.exp(1j * holo.arg))


def cone(c: ConeParams, r: float, theta: float) -> Tuple[Tuple[complex, complex], complex]:
    """Return Phi_{p,q}(r e^{i theta}) and its Lagrangian angle e^{i(p-q) theta}."""
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    scale = r**c.gamma / math.sqrt(c.p + c.q)
    Phi = (
        scale * math.sqrt(c.q) * cmath.exp(1j * c.p * theta),
        scale * 1j * math.sqrt(c.p) * cmath.exp(-1j * c.q * theta),
    )
    return Phi, cmath.exp(1j * (c.p - c.q) * theta)


def cone_arrays(c: ConeParams, z) -> SurfaceFrame:
    """Vectorised cone with analytic derivatives; the vertex has zero frame."""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    theta = np.angle(z)
    gamma = c.gamma
    norm = 1.0 / math.sqrt(c.p + c.q)
    radial = r**gamma * norm
    f1 = radial * math.sqrt(c.q) * np.exp(1j * c.p * theta)
    f2 = radial * 1j * math.sqrt(c.p) * np.exp(-1j * c.q * theta)
    nonzero = r > 0
    safe_z = np.where(nonzero, z, 1.0)
    d1 = WirtingerValue(
        f1,
        np.where(nonzero, 0.5 * (gamma + c.p) * f1 / safe_z, 0j),
        np.where(nonzero, 0.5 * (gamma - c.p) * f1 / np.conj(safe_z), 0j),
    )
    d2 = WirtingerValue(
        f2,
        np.where(nonzero, 0.5 * (gamma - c.q) * f2 / safe_z, 0j),
        np.where(nonzero, 0.5 * (gamma + c.q) * f2 / np.conj(safe_z), 0j),
    )
    dx1, dy1, dx2, dy2 = d1.dx, d1.dy, d2.dx, d2.dy
    conf = np.abs(dx1) ** 2 + np.abs(dx2) ** 2
    return SurfaceFrame(
        z=z,
        Phi1=f1,
        Phi2=f2,
        dx1=dx1,
        dx2=dx2,
        dy1=dy1,
        dy2=dy2,
        angle=lagrangian_angle(dx1, dx2, dy1, dy2, conf),
        conf_factor=conf,
    )


def is_safe(phi: DampedBlaschke, z) -> np.ndarray:
    """Safe-point predicate: |z+1| >= 0.05 and distance >= 0.02 from every p_k."""
    z = np.asarray(z, dtype=complex)
    zero_distance = np.min(np.abs(z[..., None] - phi.zeros), axis=-1)
    safe = (np.abs(z + 1.0) >= SAFE_BOUNDARY_DISTANCE) & (zero_distance >= SAFE_ZERO_DISTANCE)
    return bool(safe) if np.ndim(safe) == 0 else safe
