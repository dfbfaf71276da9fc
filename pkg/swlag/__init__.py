"""Weakly conformal Hamiltonian stationary Lagrangian disc with Schoen-Wolfson singularities."""

from .holo import DampedBlaschke, certified_truncation, evaluate, eval_boundary
from .sw_maps import ConeParams, MapParams, cone, surface, u_eval, v_eval
from .models import ResidualReport, RunConfig, SingularityFit, SurfaceSample, TestCell
from .surfaces import SURFACES, get_surface
from .exceptions import (
    SwlagError,
    DomainError,
    BranchCutError,
    SingularPointError,
    PhaseUndefined,
    AngleUndefined,
    QuadratureError,
    UnwrapError,
    ResolutionError,
    AliasError,
    FitError,
    InconclusiveError,
    ConfigError,
    ExportError,
    ParameterWarning,
    NonconvergenceWarning,
)
from . import config

__version__ = "1.0.0"
__all__ = [
    "DampedBlaschke",
    "certified_truncation",
    "evaluate",
    "eval_boundary",
    "ConeParams",
    "MapParams",
    "cone",
    "surface",
    "u_eval",
    "v_eval",
    "ResidualReport",
    "RunConfig",
    "SingularityFit",
    "SurfaceSample",
    "TestCell",
    "SURFACES",
    "get_surface",
    "SwlagError",
    "DomainError",
    "BranchCutError",
    "SingularPointError",
    "PhaseUndefined",
    "AngleUndefined",
    "QuadratureError",
    "UnwrapError",
    "ResolutionError",
    "AliasError",
    "FitError",
    "InconclusiveError",
    "ConfigError",
    "ExportError",
    "ParameterWarning",
    "NonconvergenceWarning",
    "config",
]
