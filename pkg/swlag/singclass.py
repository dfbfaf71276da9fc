"""Angular Fourier analysis of Phi around candidate singular points."""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import linregress

from .const import CLASSIFY_MIN_R2, DOMINANCE_MIN
from .cx_core import require_finite
from .exceptions import AliasError, DomainError, InconclusiveError
from .models import SingularityFit
from .quadrature import periodic_nodes
from .surfaces import BaseSurface

_LOGGER = logging.getLogger(__name__)

SurfaceEval = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]
ModeAmplitudes = Dict[int, Tuple[float, float]]

DEFAULT_N_MAX = 8
DEFAULT_N_SAMPLES = 64


def _as_eval(surface_eval: Union[BaseSurface, SurfaceEval]) -> SurfaceEval:
    if isinstance(surface_eval, BaseSurface):
        return surface_eval.components
    return surface_eval


def _circle(center: complex, radius: float, n_samples: int) -> np.ndarray:
    center = require_finite(center)
    if radius <= 0.0 or abs(center) + radius >= 1.0:
        raise DomainError(f"Circle |z - {center}| = {radius} does not lie inside the disc")
    return center + radius * np.exp(1j * periodic_nodes(n_samples))


def _mode_table(
    components: Tuple[np.ndarray, np.ndarray], n_max: int, n_samples: int
) -> ModeAmplitudes:
    coeffs = [np.fft.fft(np.asarray(c, dtype=complex)) / n_samples for c in components]
    return {
        n: (float(abs(coeffs[0][n % n_samples])), float(abs(coeffs[1][n % n_samples])))
        for n in range(-n_max, n_max + 1)
    }


def angular_profile(
    surface_eval: Union[BaseSurface, SurfaceEval],
    center: complex,
    radius: float,
    n_max: int = DEFAULT_N_MAX,
    n_samples: int = DEFAULT_N_SAMPLES,
) -> ModeAmplitudes:
    """Fourier amplitudes in theta of both components of Phi(center + r e^{i theta}).

    Returns a map from mode n in [-n_max, n_max] to (|c_n(Phi1)|, |c_n(Phi2)|).
    """
    if n_samples < 8 * n_max:
        raise AliasError(f"n_samples = {n_samples} is below 8 * n_max = {8 * n_max}")
    z = _circle(center, radius, n_samples)
    return _mode_table(_as_eval(surface_eval)(z), n_max, n_samples)


def _pair_dominance(modes: ModeAmplitudes, n_max: int) -> Tuple[int, float, float]:
    """Best j with its paired strength and the ratio to the largest other mode.

    Mode norms are taken across both components so that a unitary mixing of
    the components leaves them unchanged.
    """
    norms = {n: math.hypot(a1, a2) for n, (a1, a2) in modes.items()}
    best_j, best_strength = 0, -1.0
    for j in range(1, n_max):
        strength = math.hypot(norms[j], norms[-j - 1])
        if strength > best_strength:
            best_j, best_strength = j, strength
    others = max(norm for n, norm in norms.items() if n not in (best_j, -best_j - 1))
    dominance = best_strength / others if others > 0 else math.inf
    return best_j, best_strength, dominance


def classify(
    surface_eval: Union[BaseSurface, SurfaceEval],
    center: complex,
    radii: Sequence[float],
    n_max: int = DEFAULT_N_MAX,
    n_samples: int = DEFAULT_N_SAMPLES,
) -> SingularityFit:
    """Infer the type Sigma_{j,j+1} of a singular point from Phi - Phi(center)."""
    radii = sorted(float(r) for r in radii)
    if len(radii) < 3:
        raise DomainError("classify needs at least three radii")
    if n_samples < 8 * n_max:
        raise AliasError(f"n_samples = {n_samples} is below 8 * n_max = {8 * n_max}")
    evaluate = _as_eval(surface_eval)
    center = require_finite(center)
    base = [np.asarray(c, dtype=complex)[0] for c in evaluate(np.array([center]))]

    js, strengths, dominances = [], [], []
    innermost: Optional[ModeAmplitudes] = None
    for radius in radii:
        Phi1, Phi2 = evaluate(_circle(center, radius, n_samples))
        modes = _mode_table((Phi1 - base[0], Phi2 - base[1]), n_max, n_samples)
        if innermost is None:
            innermost = modes
        j, strength, dominance = _pair_dominance(modes, n_max)
        _LOGGER.debug("classify %s r=%.3g: j=%d dominance=%.3g", center, radius, j, dominance)
        js.append(j)
        strengths.append(strength)
        dominances.append(dominance)

    fit = SingularityFit(
        center=center,
        radius_schedule=radii,
        mode_amplitudes=innermost,
        dominance=min(dominances),
    )
    if min(dominances) < DOMINANCE_MIN:
        raise InconclusiveError(
            f"No dominant paired mode at {center} (dominance {min(dominances):.3g})", fit=fit
        )
    if len(set(js)) != 1:
        raise InconclusiveError(f"Dominant pair changes with radius at {center}: {js}", fit=fit)
    if min(strengths) <= 0.0:
        raise InconclusiveError(f"Vanishing paired amplitude at {center}", fit=fit)

    regression = linregress(np.log(radii), np.log(strengths))
    fit.scaling_slope = float(regression.slope)
    fit.r_squared = float(regression.rvalue**2)
    if fit.r_squared < CLASSIFY_MIN_R2:
        raise InconclusiveError(
            f"Scaling fit at {center} has r^2 = {fit.r_squared:.6f} < {CLASSIFY_MIN_R2}", fit=fit
        )
    fit.inferred_j = js[0]
    _LOGGER.info(
        "Singularity at %s: j=%d slope=%.6f dominance=%.3g",
        center,
        fit.inferred_j,
        fit.scaling_slope,
        fit.dominance,
    )
    return fit


def default_radii(center: complex, singular_points: Sequence[complex], count: int = 5) -> np.ndarray:
    """Radii between 2e-4 and 2e-3 times the distance to the nearest other singular point."""
    center = complex(center)
    distances = [abs(complex(p) - center) for p in singular_points if abs(complex(p) - center) > 0]
    distances.append(1.0 - abs(center))
    scale = min(distances)
    return np.geomspace(2e-4 * scale, 2e-3 * scale, count)
