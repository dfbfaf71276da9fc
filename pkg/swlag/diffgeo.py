"""Weak-form divergence residuals, fluxes, winding numbers and frame identities.

Vector fields are callables ``field(z) -> (Fx, Fy)`` on complex arrays; the
components may be complex. The perpendicular gradient is
``grad_perp f = (-f_y, f_x)``.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Iterable, NamedTuple, Tuple

import numpy as np

from .const import MIN_NODES, SINGULAR_CELL_CUTOFF, WINDING_DEFECT_MAX, WINDING_MAX_STEPS
from .cx_core import Quaternion, c2_apply_J, c2_left_mul, complex_left_mul, quat_apply_J
from .exceptions import QuadratureError, UnwrapError
from .holo import DampedBlaschke, evaluate_array
from .models import ResidualReport, SurfaceSample, TestCell
from .quadrature import gauss_legendre, periodic_nodes
from .sw_maps import MapParams, SurfaceFrame, u_arrays, v_arrays

_LOGGER = logging.getLogger(__name__)

VectorField = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def bump(rho, radius: float) -> np.ndarray:
    """Test function tau = (1 - rho^2/R^2)^3 inside the cell."""
    x = np.clip(1.0 - (np.asarray(rho) / radius) ** 2, 0.0, None)
    return x**3


def bump_derivative(rho, radius: float) -> np.ndarray:
    """Radial derivative tau' = -6 rho/R^2 (1 - rho^2/R^2)^2."""
    rho = np.asarray(rho)
    x = np.clip(1.0 - (rho / radius) ** 2, 0.0, None)
    return -6.0 * rho / radius**2 * x**2


def _cell_singularity(cell: TestCell, singular_points: Iterable[complex]) -> bool:
    inside = [p for p in singular_points if cell.contains(p)]
    if not inside:
        return False
    if len(inside) > 1 or abs(inside[0] - cell.center) > 1e-14 * max(1.0, cell.radius):
        raise QuadratureError(
            f"Cell at {cell.center!r} must be centered on the single singular point it contains"
        )
    return True


def _radial_rule(cell: TestCell, graded: bool) -> Tuple[np.ndarray, np.ndarray]:
    if not graded:
        return gauss_legendre(cell.n_radial, 0.0, cell.radius)
    xi, w = gauss_legendre(cell.n_radial, SINGULAR_CELL_CUTOFF ** (1.0 / 3.0), 1.0)
    return cell.radius * xi**3, 3.0 * cell.radius * xi**2 * w


def weak_residual_div(
    field: VectorField,
    cell: TestCell,
    identity_name: str = "div",
    singular_points: Iterable[complex] = (),
) -> ResidualReport:
    """Return |int F . grad tau| over the cell with scale int |F| |grad tau|.

    Cells containing a singular point are integrated with nodes graded like
    rho = R xi^3 toward their center and the innermost relative radius 1e-4
    is dropped.
    """
    if cell.n_radial < MIN_NODES or cell.n_angular < MIN_NODES:
        raise QuadratureError(f"Need at least {MIN_NODES}x{MIN_NODES} nodes")
    graded = _cell_singularity(cell, singular_points)
    rho, w_rho = _radial_rule(cell, graded)
    theta = periodic_nodes(cell.n_angular)
    w_theta = 2.0 * np.pi / cell.n_angular
    R, T = np.meshgrid(rho, theta, indexing="ij")
    z = cell.center + R * np.exp(1j * T)
    Fx, Fy = field(z)
    F_radial = Fx * np.cos(T) + Fy * np.sin(T)
    F_norm = np.sqrt(np.abs(Fx) ** 2 + np.abs(Fy) ** 2)
    dtau = bump_derivative(R, cell.radius)
    weights = (w_rho * rho)[:, None] * w_theta
    integral = np.sum(weights * dtau * F_radial)
    scale = float(np.sum(weights * np.abs(dtau) * F_norm))
    _LOGGER.debug(
        "Weak residual %s on cell %s r=%s: %.3e / %.3e",
        identity_name,
        cell.center,
        cell.radius,
        abs(integral),
        scale,
    )
    return ResidualReport(
        identity_name=identity_name,
        cell=cell,
        residual=float(abs(integral)),
        scale=scale,
        nodes_used=rho.size * theta.size,
    )


def field_g_grad_u(params: MapParams) -> VectorField:
    """Return z -> g grad u."""

    def field(z):
        holo = evaluate_array(params.phi, z)
        u = u_arrays(params, z, holo)
        g = np.where(holo.zero_mask, 0j, np.exp(1j * holo.arg))
        return g * u.dx, g * u.dy

    return field


def field_g_grad_second(params: MapParams) -> VectorField:
    """Return z -> g grad(-conj(v)), the second component of g grad Phi."""

    def field(z):
        holo = evaluate_array(params.phi, z)
        v = v_arrays(params, z, holo)
        g = np.where(holo.zero_mask, 0j, np.exp(1j * holo.arg))
        return -g * np.conj(v.dx), -g * np.conj(v.dy)

    return field


def field_i_gbar_grad_g(phi: DampedBlaschke) -> VectorField:
    """Return z -> i conj(g) grad g = -grad(arg phi)."""

    def field(z):
        W = evaluate_array(phi, z).log_deriv
        W = np.nan_to_num(W)
        return -W.imag, -W.real

    return field


def field_perp_grad_G(phi: DampedBlaschke) -> VectorField:
    """Return z -> grad_perp G with G = log|phi|."""

    def field(z):
        W = evaluate_array(phi, z).log_deriv
        W = np.nan_to_num(W)
        return W.imag, W.real

    return field


def structural_residual(params: MapParams, cell: TestCell) -> Tuple[ResidualReport, ResidualReport]:
    """Weak residuals of div(g grad Phi) = 0 for both C-components of Phi."""
    singular = params.phi.zeros
    return (
        weak_residual_div(field_g_grad_u(params), cell, "div(g grad u)", singular),
        weak_residual_div(field_g_grad_second(params), cell, "div(g grad conj(v))", singular),
    )


class WindingResult(NamedTuple):
    """Winding number with the rounding defect and the resolution used."""

    winding: int
    defect: float
    n_steps: int


def winding_number(
    circle_map: Callable[[np.ndarray], np.ndarray],
    center: complex,
    radius: float,
    n_steps: int = 256,
) -> WindingResult:
    """Degree of a nonvanishing map along the circle |z - center| = radius.

    The step count is doubled until successive arguments differ by less than
    pi/2 and the rounding defect is at most 0.1.
    """
    while n_steps <= WINDING_MAX_STEPS:
        theta = 2.0 * np.pi * np.arange(n_steps + 1) / n_steps
        values = circle_map(center + radius * np.exp(1j * theta))
        phases = np.unwrap(np.angle(values))
        steps = np.abs(np.diff(phases))
        total = (phases[-1] - phases[0]) / (2.0 * np.pi)
        if not np.all(np.isfinite(steps)):
            raise UnwrapError(f"Map is not finite on the circle around {center!r}")
        winding = int(round(total))
        defect = abs(total - winding)
        if steps.max() < np.pi / 2 and defect <= WINDING_DEFECT_MAX:
            return WindingResult(winding, float(defect), n_steps)
        _LOGGER.debug("Winding unresolved at %d steps (defect %.3g); doubling", n_steps, defect)
        n_steps *= 2
    raise UnwrapError(f"Winding around {center!r} unresolved after {WINDING_MAX_STEPS} steps")


def g_map(phi: DampedBlaschke) -> Callable[[np.ndarray], np.ndarray]:
    """Return z -> g(z) = phi/|phi| on arrays."""

    def circle_map(z):
        holo = evaluate_array(phi, z, with_log_deriv=False)
        return np.exp(1j * holo.arg)

    return circle_map


def _flux(phi: DampedBlaschke, center: complex, radius: float, n_steps: int) -> float:
    theta = periodic_nodes(n_steps)
    direction = np.exp(1j * theta)
    W = evaluate_array(phi, center + radius * direction).log_deriv
    return float(2.0 * np.pi / n_steps * radius * math.fsum(np.real(W * direction)))


def delta_mass(
    phi: DampedBlaschke, center: complex, radius: float, n_steps: int = 256, rtol: float = 1e-12
) -> float:
    """Return the outward flux of grad G through the circle.

    Equal to 2 pi times the number of enclosed zeros of phi. The trapezoid
    rule is doubled until two successive values agree within rtol.
    """
    value = _flux(phi, center, radius, n_steps)
    while n_steps < WINDING_MAX_STEPS:
        n_steps *= 2
        refined = _flux(phi, center, radius, n_steps)
        if abs(refined - value) <= rtol * max(1.0, abs(refined)):
            return refined
        value = refined
    raise UnwrapError(f"Flux around {center!r} unresolved after {n_steps} steps")


def cauchy_riemann_defect(phi: DampedBlaschke, z, h: float = 1e-5) -> np.ndarray:
    """Relative defect of -i conj(g) grad g = grad_perp G by central differences."""
    z = np.asarray(z, dtype=complex)
    shifts = {"x+": z + h, "x-": z - h, "y+": z + 1j * h, "y-": z - 1j * h}
    holo = {k: evaluate_array(phi, v, with_log_deriv=False) for k, v in shifts.items()}
    g = np.exp(1j * evaluate_array(phi, z, with_log_deriv=False).arg)
    unit = {k: np.exp(1j * v.arg) for k, v in holo.items()}
    gx = (unit["x+"] - unit["x-"]) / (2 * h)
    gy = (unit["y+"] - unit["y-"]) / (2 * h)
    Gx = (holo["x+"].G - holo["x-"].G) / (2 * h)
    Gy = (holo["y+"].G - holo["y-"].G) / (2 * h)
    lhs_x = -1j * np.conj(g) * gx
    lhs_y = -1j * np.conj(g) * gy
    err = np.sqrt(np.abs(lhs_x + Gy) ** 2 + np.abs(lhs_y - Gx) ** 2)
    return err / np.hypot(Gx, Gy)


def quaternionic_check(sample: SurfaceSample) -> float:
    """Return |d_x Phi + conj(g) J d_y Phi| / |d_x Phi| with conj(g) the Lagrangian angle."""
    angle = sample.require_angle()
    dx = Quaternion.from_c2(*sample.dx)
    dy = Quaternion.from_c2(*sample.dy)
    return abs(dx + complex_left_mul(angle, quat_apply_J(dy))) / abs(dx)


def frame_identities(frame: SurfaceFrame) -> Dict[str, np.ndarray]:
    """Conformality, Lagrangian and quaternionic defects relative to conf_factor.

    Entries are NaN where the conformal factor vanishes.
    """
    conf = frame.conf_factor
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = np.real(frame.dx1 * np.conj(frame.dy1) + frame.dx2 * np.conj(frame.dy2))
        norms = (
            np.abs(frame.dx1) ** 2
            + np.abs(frame.dx2) ** 2
            - np.abs(frame.dy1) ** 2
            - np.abs(frame.dy2) ** 2
        )
        omega = np.imag(np.conj(frame.dx1) * frame.dy1 + np.conj(frame.dx2) * frame.dy2)
        j1, j2 = c2_apply_J(frame.dy1, frame.dy2)
        q1, q2 = c2_left_mul(frame.angle, j1, j2)
        quat = np.abs(frame.dx1 + q1) ** 2 + np.abs(frame.dx2 + q2) ** 2
        valid = conf > 0
        return {
            "conformal_inner": np.where(valid, np.abs(inner) / conf, np.nan),
            "conformal_norms": np.where(valid, np.abs(norms) / conf, np.nan),
            "lagrangian": np.where(valid, np.abs(omega) / conf, np.nan),
            "quaternionic": np.where(valid, quat / conf, np.nan),
        }


def gradient_identity_defect(params: MapParams, z) -> np.ndarray:
    """Relative defect |grad_perp v - g grad u| / |grad u|."""
    holo = evaluate_array(params.phi, z)
    u = u_arrays(params, z, holo)
    v = v_arrays(params, z, holo)
    g = np.exp(1j * holo.arg)
    err = np.sqrt(np.abs(-v.dy - g * u.dx) ** 2 + np.abs(v.dx - g * u.dy) ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return err / np.sqrt(np.abs(u.dx) ** 2 + np.abs(u.dy) ** 2)


def finite_difference_gradient(
    func: Callable[[np.ndarray], np.ndarray], z, h: float = 1e-5
) -> Tuple[np.ndarray, np.ndarray]:
    """Central-difference (d_x, d_y) of a complex function on arrays."""
    z = np.asarray(z, dtype=complex)
    return (func(z + h) - func(z - h)) / (2 * h), (func(z + 1j * h) - func(z - 1j * h)) / (2 * h)
