"""Data models for swlag."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .config import DEFAULT_J, DEFAULT_P, DEFAULT_R_CERT, DEFAULT_S
from .const import MIN_NODES
from .exceptions import AngleUndefined, ConfigError, DomainError, QuadratureError

_LOGGER = logging.getLogger(__name__)

COMMANDS = ("eval", "verify", "norms", "classify", "poisson", "mesh")


def _complex_to_json(z: Optional[complex]) -> Optional[List[float]]:
    if z is None:
        return None
    return [z.real, z.imag]


def _complex_from_json(value: Any, name: str) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    raise ConfigError(f"{name} must be a number or an [x, y] pair, got {value!r}")


@dataclass(frozen=True)
class SurfaceSample:
    """One evaluation of Phi = (u, -conj(v)) with its analytic Jacobian."""

    z: complex
    Phi: Tuple[float, float, float, float]
    angle: Optional[complex]
    conf_factor: float
    jac: Tuple[Tuple[float, float, float, float], Tuple[float, float, float, float]]

    @property
    def dx(self) -> Tuple[complex, complex]:
        """Return d_x Phi as a C^2 pair."""
        row = self.jac[0]
        return complex(row[0], row[1]), complex(row[2], row[3])

    @property
    def dy(self) -> Tuple[complex, complex]:
        """Return d_y Phi as a C^2 pair."""
        row = self.jac[1]
        return complex(row[0], row[1]), complex(row[2], row[3])

    def require_angle(self) -> complex:
        """Return the Lagrangian angle or raise where it is undefined."""
        if self.angle is None:
            raise AngleUndefined(f"Conformal factor vanishes at z = {self.z!r}")
        return self.angle

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "z": _complex_to_json(self.z),
            "Phi": list(self.Phi),
            "angle": _complex_to_json(self.angle),
            "conf_factor": self.conf_factor,
            "jac": [list(self.jac[0]), list(self.jac[1])],
        }


@dataclass(frozen=True)
class TestCell:
    """Disc-shaped support of the test function tau = (1 - |z-c|^2/R^2)^3."""

    __test__ = False

    center: complex
    radius: float
    n_radial: int = 32
    n_angular: int = 64
    bump: str = "cubic"

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise DomainError(f"Cell radius must be positive, got {self.radius}")
        if abs(self.center) + self.radius >= 1.0:
            raise DomainError(
                f"Cell at {self.center!r} with radius {self.radius} leaves the unit disc"
            )
        if self.n_radial < MIN_NODES or self.n_angular < MIN_NODES:
            raise QuadratureError(
                f"Need at least {MIN_NODES}x{MIN_NODES} nodes, got "
                f"{self.n_radial}x{self.n_angular}"
            )

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "TestCell":
        """Build from {"center": [x, y], "radius": R, "nodes": [nr, na]}."""
        nodes = data.get("nodes", [32, 64])
        return cls(
            center=_complex_from_json(data.get("center", 0.0), "center"),
            radius=float(data["radius"]),
            n_radial=int(nodes[0]),
            n_angular=int(nodes[1]),
        )

    def contains(self, z: complex) -> bool:
        """Return True if z lies in the open cell."""
        return abs(z - self.center) < self.radius

    def refined(self) -> "TestCell":
        """Return the same cell with doubled node counts."""
        return TestCell(self.center, self.radius, 2 * self.n_radial, 2 * self.n_angular, self.bump)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "center": _complex_to_json(self.center),
            "radius": self.radius,
            "nodes": [self.n_radial, self.n_angular],
            "bump": self.bump,
        }


@dataclass(frozen=True)
class ResidualReport:
    """Weak-form residual of one identity on one test cell."""

    identity_name: str
    cell: TestCell
    residual: float
    scale: float
    nodes_used: int

    @property
    def relative(self) -> float:
        """Return residual / scale."""
        return self.residual / self.scale if self.scale > 0 else math.inf

    def passed(self, tolerance: float) -> bool:
        """Return True if the relative residual is within tolerance."""
        return self.relative <= tolerance

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "identity": self.identity_name,
            "cell": self.cell.to_dict(),
            "residual": self.residual,
            "scale": self.scale,
            "relative": self.relative,
            "nodes_used": self.nodes_used,
        }


@dataclass(frozen=True)
class FitReport:
    """Least-squares line in log-log space."""

    slope: float
    intercept: float
    r_squared: float
    window: Tuple[float, float]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "window": list(self.window),
        }


@dataclass
class SingularityFit:
    """Angular Fourier amplitudes around a candidate point and the inferred type."""

    center: complex
    radius_schedule: List[float]
    mode_amplitudes: Dict[int, Tuple[float, float]]
    inferred_j: Optional[int] = None
    scaling_slope: float = math.nan
    dominance: float = math.nan
    r_squared: float = math.nan

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "center": _complex_to_json(self.center),
            "radius_schedule": list(self.radius_schedule),
            "mode_amplitudes": {
                str(n): list(amps) for n, amps in sorted(self.mode_amplitudes.items())
            },
            "inferred_j": self.inferred_j,
            "scaling_slope": self.scaling_slope,
            "dominance": self.dominance,
            "r_squared": self.r_squared,
        }


@dataclass
class RunConfig:
    """Validated run configuration for the command-line driver."""

    s: float = DEFAULT_S
    j: int = DEFAULT_J
    p: float = DEFAULT_P
    K: Optional[int] = None
    r_cert: float = DEFAULT_R_CERT
    epsilon: Optional[float] = None
    grid: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "RunConfig":
        """Build and validate a configuration from a JSON object."""
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration must be a JSON object, got {type(data).__name__}")
        try:
            config = cls(
                s=float(data.get("s", DEFAULT_S)),
                j=data.get("j", DEFAULT_J),
                p=float(data.get("p", DEFAULT_P)),
                K=data.get("K"),
                r_cert=float(data.get("r_cert", DEFAULT_R_CERT)),
                epsilon=data.get("epsilon"),
                grid=dict(data.get("grid", {})),
                options={name: dict(data.get(name, {})) for name in COMMANDS},
            )
        except (TypeError, ValueError) as err:
            raise ConfigError(f"Malformed configuration: {err}") from err
        config.validate()
        return config

    def validate(self) -> None:
        """Check the parameter constraints of the construction."""
        if not isinstance(self.j, int) or isinstance(self.j, bool) or self.j < 1:
            raise ConfigError(f"j must be a positive integer, got {self.j!r}")
        if not 1.0 <= self.p < 2.0:
            raise ConfigError(f"p must satisfy 1 <= p < 2, got {self.p}")
        s_max = 2.0 / self.p - 1.0
        if not 0.0 < self.s < s_max:
            raise ConfigError(
                f"s = {self.s} violates the constraint 0 < s < 2/p - 1 = {s_max:.6g} for p = {self.p}"
            )
        if self.K is not None and (not isinstance(self.K, int) or self.K < 1):
            raise ConfigError(f"K must be a positive integer, got {self.K!r}")
        if not 0.0 < self.r_cert < 1.0:
            raise ConfigError(f"r_cert must lie in (0, 1), got {self.r_cert}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")

    def option(self, command: str, key: str, default: Any = None) -> Any:
        """Return a command sub-option."""
        return self.options.get(command, {}).get(key, default)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        data: Dict[str, Any] = {
            "s": self.s,
            "j": self.j,
            "p": self.p,
            "K": self.K,
            "r_cert": self.r_cert,
            "epsilon": self.epsilon,
            "grid": self.grid,
        }
        data.update({name: opts for name, opts in self.options.items() if opts})
        return data


def points_from_json(values: List[Any]) -> np.ndarray:
    """Parse a list of [x, y] pairs into a complex array."""
    return np.array([_complex_from_json(v, "point") for v in values], dtype=complex)
