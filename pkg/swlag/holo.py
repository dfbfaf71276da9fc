"""The damped Blaschke product phi(z) = exp(-(z+1)^{-s}) * prod_k B_k(z).

All evaluation happens in the shifted variable t = z + 1 and in log-polar
form, so that the modulus may underflow while the unit phase g = phi/|phi|
and G = log|phi| stay finite.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from .const import EXP_UNDERFLOW
from .config import DEFAULT_K, DEFAULT_R_CERT, DEFAULT_S
from .cx_core import LogPolarValue, require_finite, wrap_angle
from .exceptions import ConfigError, DomainError, PhaseUndefined, SingularPointError

_LOGGER = logging.getLogger(__name__)

_TAIL_DENOMINATOR = math.e - 1.0


def zero_offset(k: int) -> float:
    """Return the distance e^{-k} of p_k from -1."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    return math.exp(-k)


def tail_bound(K: int, r_cert: float) -> float:
    """Closed-form bound on sum_{k>K} sup_{|z|<=r_cert} |1 - B_k(z)|."""
    if not 0.0 < r_cert < 1.0:
        raise DomainError(f"r_cert must lie in (0, 1), got {r_cert}")
    return 2.0 * math.exp(-K) / (_TAIL_DENOMINATOR * (1.0 - r_cert))


def certified_truncation(r_cert: float, epsilon: float) -> int:
    """Return the smallest K whose closed-form tail bound is <= epsilon."""
    if not 0.0 < r_cert < 1.0:
        raise DomainError(f"r_cert must lie in (0, 1), got {r_cert}")
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    scale = 2.0 / (_TAIL_DENOMINATOR * (1.0 - r_cert))
    K = max(1, math.ceil(math.log(scale / epsilon)))
    # Guard against rounding at the threshold in either direction
    while K > 1 and tail_bound(K - 1, r_cert) <= epsilon:
        K -= 1
    while tail_bound(K, r_cert) > epsilon:
        K += 1
    _LOGGER.debug("Certified truncation K=%d for r_cert=%s, epsilon=%s", K, r_cert, epsilon)
    return K


@dataclass(frozen=True)
class DampedBlaschke:
    """The holomorphic function phi with its truncation certificate."""

    s: float
    K: int
    r_cert: float
    tail_bound: float

    def __post_init__(self) -> None:
        if not 0.0 < self.s < 1.0:
            raise DomainError(f"s must lie in (0, 1), got {self.s}")
        if self.K < 1:
            raise DomainError(f"K must be >= 1, got {self.K}")
        if not 0.0 < self.r_cert < 1.0:
            raise DomainError(f"r_cert must lie in (0, 1), got {self.r_cert}")

    @classmethod
    def from_params(
        cls,
        s: float = DEFAULT_S,
        K: Optional[int] = None,
        r_cert: float = DEFAULT_R_CERT,
        epsilon: Optional[float] = None,
    ) -> "DampedBlaschke":
        """Build from s and either K or (r_cert, epsilon)."""
        if K is None:
            K = certified_truncation(r_cert, epsilon) if epsilon is not None else DEFAULT_K
        return cls(s=float(s), K=int(K), r_cert=float(r_cert), tail_bound=tail_bound(int(K), r_cert))

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "DampedBlaschke":
        """Build from a JSON parameter object {s, K} or {s, r_cert, epsilon}."""
        if not isinstance(data, dict):
            raise ConfigError(f"Expected a JSON object, got {type(data).__name__}")
        try:
            return cls.from_params(
                s=data.get("s", DEFAULT_S),
                K=data.get("K"),
                r_cert=data.get("r_cert", DEFAULT_R_CERT),
                epsilon=data.get("epsilon"),
            )
        except DomainError as err:
            raise ConfigError(str(err)) from err

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "s": self.s,
            "K": self.K,
            "r_cert": self.r_cert,
            "tail_bound": self.tail_bound,
        }

    @property
    def zeros(self) -> np.ndarray:
        """Return p_1 .. p_K."""
        return np.expm1(-np.arange(1, self.K + 1, dtype=float))

    @property
    def deltas(self) -> np.ndarray:
        """Return 1 + p_k, exact in double precision."""
        return 1.0 + self.zeros

    def with_order(self, K: int) -> "DampedBlaschke":
        """Return a copy truncated at a different order."""
        return DampedBlaschke.from_params(s=self.s, K=K, r_cert=self.r_cert)


class HoloArrays(NamedTuple):
    """Vectorised evaluation of phi."""

    G: np.ndarray
    arg: np.ndarray
    log_deriv: np.ndarray
    zero_mask: np.ndarray


@dataclass(frozen=True)
class HoloEval:
    """Pointwise evaluation of phi."""

    value: LogPolarValue
    log_deriv: Optional[complex]
    g: complex
    G: float
    cancellation_warning: bool = False


class _CompensatedSum:
    """Running Neumaier sum over arrays of a fixed shape."""

    def __init__(self, shape) -> None:
        self.total = np.zeros(shape)
        self.comp = np.zeros(shape)

    def add(self, x) -> None:
        t = self.total + x
        self.comp += np.where(np.abs(self.total) >= np.abs(x), (self.total - t) + x, (x - t) + self.total)
        self.total = t

    def result(self) -> np.ndarray:
        return self.total + self.comp


def _product_terms(phi: DampedBlaschke, t: np.ndarray, with_log_deriv: bool):
    """Accumulate log-moduli, arguments and log-derivatives for k = K .. 1."""
    p = phi.zeros[::-1]
    delta = phi.deltas[::-1]
    G = _CompensatedSum(t.shape)
    arg = _CompensatedSum(t.shape)
    log_deriv = np.zeros_like(t) if with_log_deriv else None
    zero_mask = np.zeros(t.shape, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for pk, dk in zip(p, delta):
            num = t - dk
            den = dk - pk * t
            is_zero = num == 0
            zero_mask |= is_zero
            safe_num = np.where(is_zero, 1.0, num)
            G.add(np.log(np.abs(safe_num)) - np.log(np.abs(den)))
            arg.add(np.angle(safe_num) - np.angle(den))
            if with_log_deriv:
                log_deriv += dk * (2.0 - dk) / (safe_num * den)
    return G, arg, log_deriv, zero_mask


def evaluate_shifted(phi: DampedBlaschke, t: np.ndarray, with_log_deriv: bool = True) -> HoloArrays:
    """Evaluate phi in the shifted variable t = z + 1."""
    t = np.asarray(t, dtype=complex)
    G_sum, arg_sum, log_deriv, zero_mask = _product_terms(phi, t, with_log_deriv)
    damping = t ** (-phi.s)
    G_sum.add(-damping.real)
    arg_sum.add(-damping.imag)
    G = G_sum.result()
    arg = arg_sum.result()
    if with_log_deriv:
        log_deriv = log_deriv + phi.s * damping / t
        log_deriv = np.where(zero_mask, np.nan + 0j, log_deriv)
    else:
        log_deriv = np.full(t.shape, np.nan + 0j)
    G = np.where(zero_mask, -np.inf, G)
    return HoloArrays(G=G, arg=arg, log_deriv=log_deriv, zero_mask=zero_mask)


def evaluate_array(phi: DampedBlaschke, z, with_log_deriv: bool = True) -> HoloArrays:
    """Evaluate G, arg(phi) and phi'/phi on an array of points |z| < 1.

    Arguments are returned unwrapped (a sum of per-factor arguments); wrap
    with :func:`swlag.cx_core.wrap_angle` when a normalized value is needed.
    """
    z = np.asarray(z, dtype=complex)
    t = z + 1.0
    return evaluate_shifted(phi, t, with_log_deriv)


def cancellation_risk(phi: DampedBlaschke, z: complex) -> bool:
    """True where the phase of phi carries amplified cancellation error."""
    t_abs = abs(complex(z) + 1.0)
    if t_abs == 0.0:
        return True
    return (
        math.cos(phi.s * math.pi / 2.0) * t_abs ** (-phi.s) > EXP_UNDERFLOW
        or t_abs < 10.0 * math.exp(-phi.K)
    )


def evaluate(phi: DampedBlaschke, z: complex, with_log_deriv: bool = True) -> HoloEval:
    """Evaluate phi at one interior point."""
    z = require_finite(z)
    if abs(z) >= 1.0:
        raise DomainError(f"z must lie in the open unit disc, got {z!r}")
    arrays = evaluate_array(phi, np.array([z]), with_log_deriv)
    G = float(arrays.G[0])
    arg = float(arrays.arg[0])
    value = LogPolarValue.from_parts(G, arg)
    warn = cancellation_risk(phi, z)
    if warn:
        _LOGGER.warning("Phase of phi at %s carries amplified cancellation error", z)
    if arrays.zero_mask[0]:
        if with_log_deriv:
            raise SingularPointError(f"phi'/phi is singular at the zero z = {z!r}")
        return HoloEval(value=value, log_deriv=None, g=0j, G=-math.inf, cancellation_warning=warn)
    log_deriv = complex(arrays.log_deriv[0]) if with_log_deriv else None
    return HoloEval(
        value=value,
        log_deriv=log_deriv,
        g=cmath.rect(1.0, value.arg),
        G=G,
        cancellation_warning=warn,
    )


def boundary_shift(theta) -> np.ndarray:
    """Return t = 1 + e^{i theta} in product form 2 cos(theta/2) e^{i theta/2}."""
    theta = np.asarray(theta, dtype=float)
    return 2.0 * np.cos(theta / 2.0) * np.exp(0.5j * theta)


def boundary_shift_offset(eps) -> np.ndarray:
    """Return t = 1 + e^{i(pi + eps)} = -2i sin(eps/2) e^{i eps/2} without cancellation."""
    eps = np.asarray(eps, dtype=float)
    return -2.0j * np.sin(eps / 2.0) * np.exp(0.5j * eps)


def boundary_log_modulus(phi: DampedBlaschke, theta) -> np.ndarray:
    """Return G(e^{i theta}); the product contributes only rounding noise."""
    return evaluate_shifted(phi, boundary_shift(theta), with_log_deriv=False).G


def boundary_values_offset(phi: DampedBlaschke, eps, delta: float) -> np.ndarray:
    """Return rho^delta g at e^{i(pi + eps)} for eps != 0."""
    arrays = evaluate_shifted(phi, boundary_shift_offset(eps), with_log_deriv=False)
    with np.errstate(under="ignore"):
        modulus = np.exp(delta * arrays.G) if delta != 0 else np.ones_like(arrays.G)
    return modulus * np.exp(1j * arrays.arg)


def eval_boundary(phi: DampedBlaschke, theta: float, delta: float = 0.0) -> complex:
    """Return rho^delta g at e^{i theta}, theta in [0, 2 pi)."""
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    if not 0.0 <= theta < 2.0 * math.pi:
        raise DomainError(f"theta must lie in [0, 2 pi), got {theta}")
    if theta == math.pi:
        if delta > 0:
            return 0j
        raise PhaseUndefined("g has no limit at the boundary point z = -1")
    arrays = evaluate_shifted(phi, boundary_shift(np.array([theta])), with_log_deriv=False)
    G = float(arrays.G[0])
    modulus = math.exp(delta * G) if delta > 0 else 1.0
    return cmath.rect(modulus, wrap_angle(float(arrays.arg[0])))
