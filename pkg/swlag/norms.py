"""Numerical evidence for the function-space properties of g and Phi.

W^{1,p} integrals of point singularities are split with a smooth partition
of unity: each singular point gets a local polar patch integrated in
log-radius with Richardson extrapolation of the excluded inner disc, and the
remainder is integrated by an adaptive quadtree. An accumulation point on the
circle is handled with a shrinking margin and Richardson extrapolation
across margins.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import dblquad
from scipy.special import gamma as gamma_fn
from scipy.stats import linregress

from .config import SEED
from .const import (
    EXCLUSION_CAP,
    FIT_MIN_R2,
    MARGIN_LEVELS,
    MARGIN_START_LEVEL,
    PATCH_RADIUS_FACTOR,
    STABILITY_MAX,
)
from .exceptions import DomainError, FitError, NonconvergenceWarning, ParameterWarning
from .holo import (
    DampedBlaschke,
    boundary_shift_offset,
    boundary_values_offset,
    evaluate_array,
    evaluate_shifted,
)
from .models import FitReport
from .quadrature import adaptive_quadtree, composite_gauss, periodic_nodes, smooth_cutoff

_LOGGER = logging.getLogger(__name__)

PATCH_ANGULAR_NODES = 64
PATCH_PANEL_ORDER = 8


class GradientField(NamedTuple):
    """Magnitude |grad g| with the location of its singularities."""

    magnitude: Callable[[np.ndarray], np.ndarray]
    singular_points: Tuple[complex, ...]
    anchor: Optional[complex] = None
    damping: Optional[float] = None
    name: str = "field"


def vortex_gradient(center: complex = 0j) -> GradientField:
    """|grad (z-c)/|z-c|| = 1/|z-c|."""
    return GradientField(
        magnitude=lambda z: 1.0 / np.abs(np.asarray(z) - center),
        singular_points=(complex(center),),
        name="vortex",
    )


def cone_angle_gradient(p: int, q: int) -> GradientField:
    """Gradient magnitude |p-q|/r of the cone angle e^{i(p-q) theta}."""
    return GradientField(
        magnitude=lambda z: abs(p - q) / np.abs(np.asarray(z)),
        singular_points=(0j,),
        name=f"cone_angle_{p}_{q}",
    )


def constructed_gradient(phi: DampedBlaschke) -> GradientField:
    """|grad g| = |phi'/phi| for the constructed g, accumulating at z = -1."""

    def magnitude(z):
        W = evaluate_array(phi, z).log_deriv
        return np.abs(np.nan_to_num(W, nan=0.0))

    return GradientField(
        magnitude=magnitude,
        singular_points=tuple(complex(p) for p in phi.zeros),
        anchor=-1.0 + 0j,
        damping=phi.s,
        name="constructed",
    )


@dataclass(frozen=True)
class ExclusionSchedule:
    """Per-singularity exclusion radii, partition-of-unity patches and boundary margin."""

    centers: Tuple[complex, ...]
    radii: Tuple[float, ...]
    patch_radii: Tuple[float, ...]
    boundary_margin: float = 0.0
    margin_exponent: Optional[float] = None
    margin_step: float = 2.0

    def __post_init__(self) -> None:
        if not len(self.centers) == len(self.radii) == len(self.patch_radii):
            raise DomainError("centers, radii and patch_radii must have equal length")
        for c, delta, R in zip(self.centers, self.radii, self.patch_radii):
            if not 0.0 < delta < 0.5 * R:
                raise DomainError(f"Exclusion radius {delta} must lie in (0, R/2) for patch {R}")
            if abs(c) + R >= 1.0:
                raise DomainError(f"Patch around {c!r} with radius {R} leaves the unit disc")
        for i in range(len(self.centers)):
            for k in range(i + 1, len(self.centers)):
                gap = abs(self.centers[i] - self.centers[k])
                if gap <= self.patch_radii[i] + self.patch_radii[k]:
                    raise DomainError(
                        f"Patches around {self.centers[i]!r} and {self.centers[k]!r} overlap"
                    )

    @classmethod
    def default(cls, field: GradientField, p: float, levels: int = MARGIN_LEVELS) -> "ExclusionSchedule":
        """delta_k = min(1e-4, e^{-k}/10), capped at a tenth of the patch radius."""
        if field.anchor is None:
            return cls(
                centers=field.singular_points,
                radii=tuple(EXCLUSION_CAP for _ in field.singular_points),
                patch_radii=tuple(0.5 for _ in field.singular_points),
            )
        s = field.damping or 0.0
        k_max = MARGIN_START_LEVEL + 2 * (levels - 1)
        centers, radii, patch_radii = [], [], []
        for k, c in enumerate(field.singular_points[:k_max], start=1):
            R = PATCH_RADIUS_FACTOR * math.exp(-k)
            if s > 0:
                R = min(R, 0.125 / s * math.exp(-k * (1.0 + s)))
            centers.append(c)
            patch_radii.append(R)
            radii.append(min(EXCLUSION_CAP, math.exp(-k) / 10.0, R / 10.0))
        return cls(
            centers=tuple(centers),
            radii=tuple(radii),
            patch_radii=tuple(patch_radii),
            boundary_margin=math.exp(-MARGIN_START_LEVEL - 0.5),
            margin_exponent=2.0 - p * (1.0 + s),
        )


class SobolevEstimate(NamedTuple):
    """Extrapolated integral of |grad g|^p and its refinement stability."""

    estimate: float
    stability: float


def _annulus_integral(f, p: float, center: complex, lo: float, R: float) -> float:
    """int_{lo < rho < R} |f|^p chi dA in local polar coordinates."""
    theta = periodic_nodes(PATCH_ANGULAR_NODES, 0.5)
    direction = np.exp(1j * theta)
    n_panels = max(1, math.ceil(math.log(0.5 * R / lo)))
    eta, w_eta = composite_gauss(np.linspace(math.log(lo), math.log(0.5 * R), n_panels + 1), PATCH_PANEL_ORDER)
    rho_inner = np.exp(eta)
    rho_outer, w_outer = composite_gauss(np.linspace(0.5 * R, R, 5), 12)
    rho = np.concatenate([rho_inner, rho_outer])
    # rho d rho = rho^2 d eta on the logarithmic panels
    w_rho = np.concatenate([w_eta * rho_inner**2, w_outer * rho_outer * smooth_cutoff(rho_outer, R)])
    values = f(center + rho[:, None] * direction[None, :]) ** p
    return float(2.0 * np.pi / PATCH_ANGULAR_NODES * np.sum(w_rho[:, None] * values))


def patch_integral(f, p: float, center: complex, delta: float, R: float) -> float:
    """Patch integral with the inner disc extrapolated from (delta, delta/10)."""
    coarse = _annulus_integral(f, p, center, delta, R)
    fine = _annulus_integral(f, p, center, delta / 10.0, R)
    ratio = 10.0 ** (-(2.0 - p))
    return (fine - ratio * coarse) / (1.0 - ratio)


def _remainder_weight(z, centers, patch_radii) -> np.ndarray:
    weight = np.ones(np.shape(z))
    for c, R in zip(centers, patch_radii):
        weight -= smooth_cutoff(np.abs(z - c), R)
    return weight


def _remainder(field: GradientField, p: float, centers, patch_radii, margin: float, rtol: float) -> float:
    f = field.magnitude

    def masked(z):
        weight = _remainder_weight(z, centers, patch_radii)
        active = weight > 0
        values = np.zeros(np.shape(z))
        values[active] = np.nan_to_num(f(z[active]) ** p, posinf=0.0) * weight[active]
        return values

    if field.anchor is None:

        def integrand(sigma, theta):
            return masked(sigma * np.exp(1j * theta)) * sigma

        bounds = (0.0, 1.0, -np.pi, np.pi)
    else:
        anchor = field.anchor
        theta_max = math.acos(0.5 * margin)

        def integrand(sigma, theta):
            span = np.log(2.0 * np.cos(theta) / margin)
            rho = margin * np.exp(sigma * span)
            z = anchor * (1.0 - rho * np.exp(1j * theta))
            return masked(z) * rho**2 * span

        bounds = (0.0, 1.0, -theta_max, theta_max)
    result = adaptive_quadtree(integrand, bounds, rtol=rtol)
    if not result.converged:
        warnings.warn(f"Remainder integral of {field.name} did not converge", NonconvergenceWarning)
    return result.value


def sobolev_w1p(
    field: GradientField,
    p: float,
    schedule: Optional[ExclusionSchedule] = None,
    refinement_levels: int = MARGIN_LEVELS,
    rtol: float = 1e-7,
) -> SobolevEstimate:
    """Estimate int_{D^2} |grad g|^p with a refinement-stability figure.

    Raises ParameterWarning when the damping exponent violates s < 2/p - 1.
    """
    if not 1.0 <= p < 2.0:
        raise DomainError(f"p must satisfy 1 <= p < 2, got {p}")
    if field.damping is not None and field.damping >= 2.0 / p - 1.0:
        raise ParameterWarning(
            f"s = {field.damping} violates s < 2/p - 1 = {2.0 / p - 1.0:.6g}; "
            f"|grad g|^p is not integrable at z = -1"
        )
    if refinement_levels < 2:
        raise DomainError("At least two refinement levels are needed")
    if schedule is None:
        schedule = ExclusionSchedule.default(field, p, refinement_levels)

    patches: Dict[int, float] = {}

    def patch(i: int) -> float:
        if i not in patches:
            patches[i] = patch_integral(
                field.magnitude, p, schedule.centers[i], schedule.radii[i], schedule.patch_radii[i]
            )
        return patches[i]

    level_estimates: List[float] = []
    for level in range(refinement_levels):
        if field.anchor is None:
            margin = 0.0
            active = list(range(len(schedule.centers)))
            level_rtol = rtol * 10.0 ** (-level)
        else:
            margin = schedule.boundary_margin * math.exp(-schedule.margin_step * level)
            active = [
                i
                for i, c in enumerate(schedule.centers)
                if abs(c - field.anchor) - schedule.patch_radii[i] > margin
            ]
            level_rtol = rtol
        remainder = _remainder(
            field,
            p,
            [schedule.centers[i] for i in active],
            [schedule.patch_radii[i] for i in active],
            margin,
            level_rtol,
        )
        total = math.fsum([patch(i) for i in active] + [remainder])
        _LOGGER.debug(
            "W1p level %d: margin=%.3g, %d patches, estimate=%.10g", level, margin, len(active), total
        )
        level_estimates.append(total)

    if field.anchor is None:
        estimate = level_estimates[-1]
        previous = level_estimates[-2]
    else:
        ratio = math.exp(-schedule.margin_step * schedule.margin_exponent)
        extrapolated = [
            (fine - ratio * coarse) / (1.0 - ratio)
            for coarse, fine in zip(level_estimates[:-1], level_estimates[1:])
        ]
        estimate = extrapolated[-1]
        previous = extrapolated[-2] if len(extrapolated) > 1 else level_estimates[-1]
    stability = abs(estimate - previous) / abs(estimate)
    if stability > STABILITY_MAX:
        warnings.warn(
            f"W1,{p} estimate of {field.name} changed by {stability:.1%} between refinement levels",
            NonconvergenceWarning,
        )
    return SobolevEstimate(estimate, stability)


class BoundCheck(NamedTuple):
    """Computed value against a stated bound."""

    lhs: float
    rhs: float
    ok: bool


def _disc_exit_radius(center: float, theta: np.ndarray) -> np.ndarray:
    """Distance from a real center c in D^2 to the unit circle along direction theta."""
    c_cos = center * np.cos(theta)
    root = np.sqrt(1.0 - (center * np.sin(theta)) ** 2)
    one_minus = (1.0 - center) * (1.0 + center)
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = np.where(c_cos >= 0, one_minus / (c_cos + root), -c_cos + root)
    return stable


def dipole_integral(k: int, p: float, rtol: float = 1e-8) -> float:
    """int_{D^2} |(z-p_k)/|z-p_k|^2 - (z-1/p_k)/|z-1/p_k|^2|^p."""
    pk = math.expm1(-k)
    qk = 1.0 / pk
    a = 1.0 / (2.0 - p)

    def integrand(x, theta):
        rho_max = _disc_exit_radius(pk, theta)
        rho = rho_max * x**a
        direction = np.exp(1j * theta)
        z = pk + rho * direction
        reflected = (z - qk) / np.abs(z - qk) ** 2
        # rho^{1-p} d rho / dx collapses to a rho_max^{2-p} under rho = rho_max x^a
        return a * rho_max ** (2.0 - p) * np.abs(direction - rho * reflected) ** p

    return adaptive_quadtree(integrand, (0.0, 1.0, 0.0, 2.0 * np.pi), rtol=rtol).value


def dipole_bound_check(k: int, p: float) -> BoundCheck:
    """Compare the dipole integral with 16 e^{-(2-p)k}."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not 1.0 <= p < 2.0:
        raise DomainError(f"p must satisfy 1 <= p < 2, got {p}")
    lhs = dipole_integral(k, p)
    rhs = 16.0 * math.exp(-(2.0 - p) * k)
    _LOGGER.debug("Dipole k=%d p=%s: lhs=%.6g rhs=%.6g", k, p, lhs, rhs)
    return BoundCheck(lhs, rhs, lhs <= rhs)


def dipole_pointwise_check(k: int, z) -> BoundCheck:
    """Pointwise dipole estimate |field| <= 3 |p_k - 1/p_k| / |z - p_k|^2 on arrays."""
    pk = math.expm1(-k)
    qk = 1.0 / pk
    z = np.asarray(z, dtype=complex)
    lhs = np.abs((z - pk) / np.abs(z - pk) ** 2 - (z - qk) / np.abs(z - qk) ** 2)
    rhs = 3.0 * abs(pk - qk) / np.abs(z - pk) ** 2
    return BoundCheck(lhs, rhs, bool(np.all(lhs <= rhs)))


class DampingBound(NamedTuple):
    """Quadrature value, exact value and ball bound of int |grad Im (z+1)^{-s}|^p."""

    lhs: float
    exact: float
    rhs: float
    ok: bool


def damping_bound_check(s: float, p: float, rtol: float = 1e-9) -> DampingBound:
    """int_{D^2} |grad Im (z+1)^{-s}|^p against the integral over the ball B_2(-1).

    The integral is taken in polar coordinates about -1, where the disc is
    rho < 2 cos(theta); ``exact`` is the closed form of the same integral.
    """
    e = p * (1.0 + s)
    if e >= 2.0:
        raise ParameterWarning(f"s = {s} violates s < 2/p - 1 = {2.0 / p - 1.0:.6g}")
    b = 2.0 - e

    def integrand(rho, theta):
        t = rho * cmath.exp(1j * theta)
        return abs(s * t ** (-s - 1.0)) ** p * rho

    lhs, _ = dblquad(
        integrand,
        -0.5 * math.pi,
        0.5 * math.pi,
        0.0,
        lambda theta: 2.0 * math.cos(theta),
        epsabs=0.0,
        epsrel=rtol,
    )
    angular = math.sqrt(math.pi) * gamma_fn(0.5 * (b + 1.0)) / gamma_fn(0.5 * b + 1.0)
    exact = s**p * 2.0**b / b * angular
    rhs = 2.0 * math.pi * s**p * 2.0**b / b
    return DampingBound(float(lhs), float(exact), rhs, lhs <= rhs)


class WeakL2Estimate(NamedTuple):
    """sup over the grid of lambda^2 |{|f| > lambda}| and the full profile."""

    sup_value: float
    profile: List[Tuple[float, float]]


def weak_l2(
    field: Union[GradientField, Callable[[np.ndarray], np.ndarray]],
    region: Tuple[complex, float],
    lambda_grid: Sequence[float],
    n_dyadic: int = 30,
    n_angular: int = 16,
    n_radial: int = 256,
    seed: int = SEED,
) -> WeakL2Estimate:
    """Stratified Monte Carlo distribution function of |f| on a disc.

    Strata are dyadic annuli about the region center, each split into
    n_radial x n_angular cells with one uniform sample per cell.
    """
    f = field.magnitude if isinstance(field, GradientField) else field
    center, radius = complex(region[0]), float(region[1])
    if abs(center) + radius > 1.0:
        raise DomainError(f"Region around {center!r} with radius {radius} leaves the unit disc")
    rng = np.random.default_rng(seed)
    edges = radius * 2.0 ** (-np.arange(n_dyadic + 1, dtype=float))
    outer = np.concatenate([edges[:-1], [edges[-1]]])
    inner = np.concatenate([edges[1:], [0.0]])
    # radial sub-strata equal in area inside each annulus
    fractions = np.linspace(0.0, 1.0, n_radial + 1)
    r2_lo = inner[:, None] ** 2 + fractions[None, :-1] * (outer**2 - inner**2)[:, None]
    r2_hi = inner[:, None] ** 2 + fractions[None, 1:] * (outer**2 - inner**2)[:, None]
    u = rng.random((outer.size, n_radial, n_angular))
    v = rng.random((outer.size, n_radial, n_angular))
    r = np.sqrt(r2_lo[:, :, None] + u * (r2_hi - r2_lo)[:, :, None])
    theta = 2.0 * np.pi * (np.arange(n_angular)[None, None, :] + v) / n_angular
    cell_area = (np.pi * (r2_hi - r2_lo) / n_angular)[:, :, None] * np.ones_like(u)
    values = np.nan_to_num(f(center + r * np.exp(1j * theta)), nan=np.inf)
    profile = []
    for lam in lambda_grid:
        measure = math.fsum(cell_area[values > lam])
        profile.append((float(lam), float(lam * lam * measure)))
    sup_value = max(value for _, value in profile)
    return WeakL2Estimate(sup_value, profile)


def holder_fit(
    map_eval: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]],
    center: complex,
    radii: Optional[Sequence[float]] = None,
    n_angles: int = 64,
) -> FitReport:
    """Slope of log max_theta |Phi(c + r e^{i theta}) - Phi(c)| against log r."""
    radii = np.geomspace(1e-6, 1e-4, 9) if radii is None else np.asarray(radii, dtype=float)
    theta = periodic_nodes(n_angles)
    base1, base2 = map_eval(np.array([complex(center)]))
    ring = complex(center) + radii[:, None] * np.exp(1j * theta)[None, :]
    phi1, phi2 = map_eval(ring)
    deviation = np.sqrt(np.abs(phi1 - base1[0]) ** 2 + np.abs(phi2 - base2[0]) ** 2).max(axis=1)
    fit = linregress(np.log(radii), np.log(deviation))
    report = FitReport(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        window=(float(radii.min()), float(radii.max())),
    )
    if report.r_squared < FIT_MIN_R2:
        raise FitError(f"Holder fit at {center!r} has r^2 = {report.r_squared:.4f}")
    return report


_STENCILS = {
    0: ((0,), (1.0,), 0),
    1: ((-1, 1), (-0.5, 0.5), 1),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0), 2),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5), 3),
}


class TraceProbe(NamedTuple):
    """Derivative magnitudes of a boundary trace on windows shrinking to theta = pi."""

    max_derivative: float
    per_window: List[float]
    windows: List[float]
    growth_slope: float
    bounded: bool


def boundary_trace_probe(
    phi: DampedBlaschke,
    delta: float,
    order: int,
    theta_window: Optional[Sequence[float]] = None,
    with_phase: bool = True,
    stencil_divisions: int = 64,
) -> TraceProbe:
    """Finite-difference derivatives of theta -> rho^delta g(e^{i theta}) near pi.

    Each window w is probed at theta = pi +- w with step w/64. The trace is
    reported bounded when the derivative in the smallest window is at most
    half the largest one observed.
    """
    if order not in _STENCILS:
        raise DomainError(f"order must lie in 0..3, got {order}")
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    windows = np.geomspace(1e-1, 1e-12, 12) if theta_window is None else np.asarray(theta_window, dtype=float)
    offsets, weights, power = _STENCILS[order]

    def trace(eps):
        if with_phase:
            return boundary_values_offset(phi, eps, delta)
        G = evaluate_shifted(phi, boundary_shift_offset(eps), with_log_deriv=False).G
        with np.errstate(under="ignore"):
            return np.exp(delta * G)

    per_window = []
    for w in windows:
        h = w / stencil_divisions
        magnitude = 0.0
        for side in (1.0, -1.0):
            points = side * w + h * np.asarray(offsets, dtype=float)
            derivative = np.dot(weights, trace(points)) / h**power
            magnitude = max(magnitude, float(abs(derivative)))
        per_window.append(magnitude)
    per_window_arr = np.asarray(per_window)
    max_derivative = float(per_window_arr.max())
    bounded = bool(per_window_arr[-1] <= 0.5 * max_derivative) or max_derivative == 0.0
    tail = slice(len(windows) // 2, None)
    positive = per_window_arr[tail] > 0
    if positive.sum() >= 2:
        growth_slope = float(
            linregress(np.log(windows[tail][positive]), np.log(per_window_arr[tail][positive])).slope
        )
    else:
        growth_slope = math.nan
    _LOGGER.debug(
        "Trace probe delta=%s order=%d: max=%.3g bounded=%s slope=%.3g",
        delta,
        order,
        max_derivative,
        bounded,
        growth_slope,
    )
    return TraceProbe(max_derivative, per_window, [float(w) for w in windows], growth_slope, bounded)


class ZeroOrderFit(NamedTuple):
    """Decay of log(|phi| / |theta - pi|^n) along theta = pi + 2^{-m}."""

    order: int
    fit: FitReport
    log_ratios: List[float]
    vanishes: bool


def phi_boundary_log_modulus(phi: DampedBlaschke) -> Callable[[np.ndarray], np.ndarray]:
    """Return eps -> log|phi(e^{i(pi + eps)})|."""

    def log_modulus(eps):
        return evaluate_shifted(phi, boundary_shift_offset(eps), with_log_deriv=False).G

    return log_modulus


def infinite_order_zero_check(
    source: Union[DampedBlaschke, Callable[[np.ndarray], np.ndarray]],
    orders: Sequence[int] = (1, 2, 3, 4, 5),
    m_values: Sequence[int] = tuple(range(6, 61)),
    tail: int = 8,
) -> List[ZeroOrderFit]:
    """Check |phi(e^{i theta})| / |theta - pi|^n -> 0 for each order n.

    A ratio vanishes when its last log value is below -30 and the last
    ``tail`` values decrease strictly.
    """
    log_modulus = phi_boundary_log_modulus(source) if isinstance(source, DampedBlaschke) else source
    m = np.asarray(m_values, dtype=float)
    eps = 2.0 ** (-m)
    G = np.asarray(log_modulus(eps), dtype=float)
    results = []
    for n in orders:
        log_ratio = G + n * m * math.log(2.0)
        fit = linregress(np.log(eps[-tail:]), log_ratio[-tail:])
        vanishes = bool(log_ratio[-1] < -30.0 and np.all(np.diff(log_ratio[-tail:]) < 0))
        results.append(
            ZeroOrderFit(
                order=n,
                fit=FitReport(
                    slope=float(fit.slope),
                    intercept=float(fit.intercept),
                    r_squared=float(fit.rvalue**2),
                    window=(float(eps[-tail:].min()), float(eps[-tail:].max())),
                ),
                log_ratios=[float(x) for x in log_ratio],
                vanishes=vanishes,
            )
        )
    return results
