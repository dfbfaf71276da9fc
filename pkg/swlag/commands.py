"""Command implementations behind the swlag command-line driver."""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from .config import OUT_DIR, SEED, THREADS
from .const import EXIT_OK, EXIT_RESIDUAL_FAILURE, Tolerance
from .diffgeo import (
    delta_mass,
    field_g_grad_u,
    field_i_gbar_grad_g,
    frame_identities,
    g_map,
    gradient_identity_defect,
    structural_residual,
    weak_residual_div,
    winding_number,
)
from .exceptions import InconclusiveError, NonconvergenceWarning
from .export import export_mesh
from .holo import DampedBlaschke
from .models import ResidualReport, RunConfig, SurfaceSample, TestCell, points_from_json
from .norms import (
    constructed_gradient,
    damping_bound_check,
    dipole_bound_check,
    holder_fit,
    infinite_order_zero_check,
    boundary_trace_probe,
    sobolev_w1p,
    weak_l2,
)
from .poisson import (
    blaschke_boundary_data,
    constant_trace_defect,
    g_boundary_data,
    modulus_convergence_profile,
    trace_defect,
)
from .singclass import classify, default_radii
from .surfaces import ConstructedSurface, get_surface
from .sw_maps import MapParams, is_safe, surface, surface_arrays

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def build_phi(config: RunConfig) -> DampedBlaschke:
    """Build phi from the run configuration."""
    return DampedBlaschke.from_params(
        s=config.s, K=config.K, r_cert=config.r_cert, epsilon=config.epsilon
    )


def build_params(config: RunConfig) -> MapParams:
    """Build the map parameters from the run configuration."""
    return MapParams(j=config.j, phi=build_phi(config))


def _parallel_map(func: Callable[[T], R], items: Iterable[T], threads: int) -> List[R]:
    """Ordered map, threaded when threads > 1."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _random_disc_points(rng: np.random.Generator, n: int, r_max: float = 0.99) -> np.ndarray:
    r = r_max * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return r * np.exp(1j * theta)


def safe_points(phi: DampedBlaschke, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n uniformly distributed safe points."""
    found: List[np.ndarray] = []
    total = 0
    while total < n:
        candidates = _random_disc_points(rng, 2 * n)
        candidates = candidates[is_safe(phi, candidates)]
        found.append(candidates)
        total += candidates.size
    return np.concatenate(found)[:n]


def cmd_eval(config: RunConfig, points: Optional[Sequence[Any]] = None) -> List[SurfaceSample]:
    """Evaluate Phi with its frame at the given points."""
    params = build_params(config)
    if points is None:
        points = config.option("eval", "points", [[0.0, 0.0]])
    z = points_from_json(list(points))
    _LOGGER.debug("Evaluating Phi at %d points", z.size)
    return [surface(params, complex(zk)) for zk in z]


def _section(values: Sequence[float], tolerance: float, **extra: Any) -> Dict[str, Any]:
    worst = float(np.max(values)) if len(values) else 0.0
    return {"max": worst, "tolerance": tolerance, "passed": bool(worst <= tolerance), "count": len(values), **extra}


def default_cells(
    phi: DampedBlaschke, rng: np.random.Generator, n_cells: int, n_singular: int, nodes: Tuple[int, int]
) -> List[TestCell]:
    """Cells centered on p_1..p_n and random zero-free cells."""
    n_radial, n_angular = nodes
    cells = [
        TestCell(complex(phi.zeros[k - 1]), 0.3 * math.exp(-k), n_radial, n_angular)
        for k in range(1, min(n_singular, phi.K) + 1)
    ]
    for c in safe_points(phi, max(0, n_cells - len(cells)), rng):
        zero_gap = float(np.min(np.abs(c - phi.zeros)))
        radius = min(0.1, 0.5 * zero_gap, 0.5 * (1.0 - abs(c)))
        cells.append(TestCell(complex(c), radius, n_radial, n_angular))
    return cells


def _winding_checks(phi: DampedBlaschke, rng: np.random.Generator, n_zeros: int, n_free: int):
    circle_map = g_map(phi)
    around = [
        (complex(phi.zeros[k - 1]), 0.3 * math.exp(-k), 1) for k in range(1, min(n_zeros, phi.K) + 1)
    ]
    free = [(complex(c), 0.1, 0) for c in _random_disc_points(rng, n_free, 0.5)]
    results = []
    for center, radius, expected in around + free:
        result = winding_number(circle_map, center, radius)
        results.append(
            {
                "center": center,
                "radius": radius,
                "expected": expected,
                "winding": result.winding,
                "defect": result.defect,
                "passed": result.winding == expected and result.defect < Tolerance.WINDING_DEFECT,
            }
        )
    return results


def cmd_verify(config: RunConfig, threads: int = THREADS) -> Tuple[Dict[str, Any], int]:
    """Run the residual suite; return the report and the exit code."""
    params = build_params(config)
    phi = params.phi
    rng = np.random.default_rng(config.option("verify", "seed", SEED))
    n_points = int(config.option("verify", "points", 1000))
    nodes = tuple(config.option("verify", "nodes", [64, 128]))

    z = safe_points(phi, n_points, rng)
    identities = frame_identities(surface_arrays(params, z))
    sections: Dict[str, Any] = {
        "conformal_inner": _section(identities["conformal_inner"], Tolerance.CONFORMAL),
        "conformal_norms": _section(identities["conformal_norms"], Tolerance.CONFORMAL),
        "lagrangian": _section(identities["lagrangian"], Tolerance.LAGRANGIAN),
        "quaternionic": _section(identities["quaternionic"], Tolerance.QUATERNIONIC),
        "gradient_identity": _section(gradient_identity_defect(params, z), Tolerance.GRADIENT_IDENTITY),
    }

    cells = default_cells(
        phi,
        rng,
        int(config.option("verify", "cells", 50)),
        int(config.option("verify", "singular_cells", 5)),
        nodes,
    )
    singular = phi.zeros

    def residuals(cell: TestCell) -> List[ResidualReport]:
        return [
            weak_residual_div(field_g_grad_u(params), cell, "div(g grad u)", singular),
            weak_residual_div(field_i_gbar_grad_g(phi), cell, "div(i conj(g) grad g)", singular),
            *structural_residual(params, cell),
        ]

    reports = [r for batch in _parallel_map(residuals, cells, threads) for r in batch]
    for name in sorted({r.identity_name for r in reports}):
        chosen = [r for r in reports if r.identity_name == name]
        sections[f"weak {name}"] = _section([r.relative for r in chosen], Tolerance.WEAK_RESIDUAL)

    masses = []
    for k in range(1, min(5, phi.K) + 1):
        safe_radius = 0.5 * (1.0 - math.exp(-1.0)) * math.exp(-k)
        for factor in (0.5, 1.0):
            mass = delta_mass(phi, complex(phi.zeros[k - 1]), factor * safe_radius)
            masses.append(abs(mass - 2.0 * math.pi) / (2.0 * math.pi))
    sections["delta_mass"] = _section(masses, Tolerance.DELTA_MASS)

    windings = _winding_checks(
        phi, rng, int(config.option("verify", "winding_zeros", 10)), int(config.option("verify", "winding_free", 10))
    )
    sections["winding"] = {
        "passed": all(w["passed"] for w in windings),
        "max": max(w["defect"] for w in windings),
        "tolerance": Tolerance.WINDING_DEFECT,
        "circles": windings,
    }

    passed = all(section["passed"] for section in sections.values())
    relative = [
        section["max"] for name, section in sections.items() if name.startswith("weak ")
    ]
    result = {
        "sections": sections,
        "max_weak_relative_residual": max(relative) if relative else 0.0,
    }
    for name, section in sections.items():
        level = logging.INFO if section["passed"] else logging.WARNING
        _LOGGER.log(level, "%s: max=%.3g tolerance=%.3g", name, section["max"], section["tolerance"])
    return result, EXIT_OK if passed else EXIT_RESIDUAL_FAILURE


def cmd_norms(config: RunConfig) -> Dict[str, Any]:
    """Function-space estimates for g, G and Phi."""
    phi = build_phi(config)
    p = config.p
    result: Dict[str, Any] = {}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonconvergenceWarning)
        result["w1p"] = sobolev_w1p(constructed_gradient(phi), p)._asdict()
        result["damping"] = damping_bound_check(phi.s, p)._asdict()
        result["dipole"] = {
            str(k): dipole_bound_check(k, p)._asdict() for k in config.option("norms", "dipole_k", [1, 2, 3, 4])
        }
        p1 = complex(phi.zeros[0])
        lambdas = config.option("norms", "lambdas", list(np.geomspace(10.0, 1e4, 13)))
        result["weak_l2"] = weak_l2(constructed_gradient(phi), (p1, 0.1), lambdas)._asdict()
        surface_map = ConstructedSurface(build_params(config))
        result["holder"] = holder_fit(surface_map.components, p1).to_dict()
        result["boundary_traces"] = [
            {"delta": delta, **boundary_trace_probe(phi, delta, order=1)._asdict()}
            for delta in config.option("norms", "trace_deltas", [0.0, 0.5, 1.0])
        ]
        result["infinite_order_zero"] = [
            {"order": z.order, "fit": z.fit.to_dict(), "vanishes": z.vanishes}
            for z in infinite_order_zero_check(phi)
        ]
    result["warnings"] = [str(w.message) for w in caught]
    return result


def cmd_classify(
    config: RunConfig, centers: Optional[Sequence[Any]] = None, threads: int = THREADS
) -> List[Dict[str, Any]]:
    """Classify the singularity type at each center."""
    surface_map = ConstructedSurface(build_params(config))
    if centers is None:
        centers = config.option("classify", "centers", None)
    if centers is None:
        z = surface_map.params.phi.zeros[:3].astype(complex)
    else:
        z = points_from_json(list(centers))

    def run(center: complex) -> Dict[str, Any]:
        radii = default_radii(center, surface_map.singular_points)
        try:
            return {"status": "classified", **classify(surface_map, center, radii).to_dict()}
        except InconclusiveError as err:
            _LOGGER.info("Inconclusive at %s: %s", center, err)
            partial = err.fit.to_dict() if err.fit is not None else {"center": [center.real, center.imag]}
            return {"status": "inconclusive", "message": str(err), **partial}

    return _parallel_map(run, [complex(c) for c in z], threads)


def cmd_poisson(config: RunConfig) -> Dict[str, Any]:
    """Modulus-convergence profiles and the constant-trace defect."""
    phi = build_phi(config)
    M = int(config.option("poisson", "M", 4096))
    r_list = config.option("poisson", "radii", [0.9, 0.95, 0.99, 0.995])
    smooth = blaschke_boundary_data(0.5, M)
    return {
        "M": M,
        "g_profile": modulus_convergence_profile(g_boundary_data(phi, M), r_list),
        "blaschke_profile": modulus_convergence_profile(smooth, r_list),
        "constant_trace_defect": constant_trace_defect(phi, M),
        "monomial_trace_defect": trace_defect(
            lambda theta: np.log(np.abs(2.0 * np.exp(3j * theta))), M
        ),
    }


def cmd_mesh(config: RunConfig, out_dir: Union[str, Path] = OUT_DIR) -> Dict[str, Any]:
    """Write the field CSV, the projected OBJ and the angle sidecar."""
    name = config.option("mesh", "surface", "constructed")
    if name == "cone":
        surface_map = get_surface("cone", p=config.option("mesh", "p", 1), q=config.option("mesh", "q", 2))
    else:
        surface_map = ConstructedSurface(build_params(config))
    grid = config.grid or {}
    return export_mesh(
        surface_map,
        out_dir,
        n_r=int(grid.get("n_r", config.option("mesh", "n_r", 128))),
        n_theta=int(grid.get("n_theta", config.option("mesh", "n_theta", 256))),
        r_max=float(config.option("mesh", "r_max", 0.999)),
        projection=config.option("mesh", "projection", "drop"),
        drop=int(config.option("mesh", "drop", 3)),
    )
