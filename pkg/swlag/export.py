"""Report serialization and field/mesh file output."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .config import OUT_DIR
from .const import FLOAT_DIGITS, REPORT_SCHEMA
from .exceptions import DomainError, ExportError
from .models import RunConfig
from .surfaces import BaseSurface
from .sw_maps import SurfaceFrame

_LOGGER = logging.getLogger(__name__)

_FLOAT_FMT = f"%.{FLOAT_DIGITS}g"
PROJECTIONS = ("drop", "stereographic")


def to_jsonable(obj: Any) -> Any:
    """Convert results into plain JSON values; non-finite floats become null."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps_report(report: Dict[str, Any]) -> str:
    """Serialize a report deterministically (sorted keys, round-trip floats)."""
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def build_report(
    command: str, config: RunConfig, result: Any, passed: Optional[bool] = None
) -> Dict[str, Any]:
    """Wrap a command result in the versioned report envelope."""
    report = {
        "schema": REPORT_SCHEMA,
        "command": command,
        "config": config.to_dict(),
        "result": result,
    }
    if passed is not None:
        report["passed"] = passed
    return report


class ReportStorage:
    """Stores JSON reports under an output directory, one file per command."""

    def __init__(self, out_dir: Union[str, Path] = OUT_DIR):
        """Initialize report storage."""
        self.out_dir = Path(out_dir).expanduser()

    def path(self, name: str) -> Path:
        """Return the report path for a command."""
        return self.out_dir / f"{name}.json"

    def save(self, name: str, report: Dict[str, Any]) -> Path:
        """Save a report to file."""
        path = self.path(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w") as f:
                f.write(dumps_report(report))
        except OSError as e:
            raise ExportError(f"Failed to save report to {path}: {e}") from e
        _LOGGER.debug("Report saved to %s", path)
        return path


def _write_table(path: Union[str, Path], header: str, table: np.ndarray) -> Path:
    path = Path(path).expanduser()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, table, delimiter=",", header=header, comments="", fmt=_FLOAT_FMT)
    except OSError as e:
        raise ExportError(f"Failed to write {path}: {e}") from e
    _LOGGER.debug("Wrote %d rows to %s", table.shape[0], path)
    return path


def write_field_csv(path: Union[str, Path], frame: SurfaceFrame) -> Path:
    """Write rows (x, y, Phi_1..Phi_4, angle, conf_factor); angle is NaN where undefined."""
    z = frame.z.ravel()
    angle = frame.angle.ravel()
    table = np.column_stack(
        [z.real, z.imag, frame.position.reshape(-1, 4), angle.real, angle.imag, frame.conf_factor.ravel()]
    )
    return _write_table(path, "x,y,phi1,phi2,phi3,phi4,angle_re,angle_im,conf_factor", table)


@dataclass(frozen=True)
class PolarMesh:
    """Vertices of a polar grid and its triangles (0-based)."""

    z: np.ndarray
    faces: np.ndarray
    n_r: int
    n_theta: int

    @property
    def vertex_count(self) -> int:
        """Return the number of vertices."""
        return self.z.size


def polar_mesh(n_r: int, n_theta: int, r_max: float = 0.999) -> PolarMesh:
    """Polar grid graded toward the unit circle and toward theta = pi.

    Vertex 0 is the origin and ring i >= 1 occupies vertices
    1 + (i - 1) * n_theta onward; the first ring of triangles is a fan
    around vertex 0 and the remaining rings are split quads, periodic in theta.
    """
    if n_r < 2 or n_theta < 3:
        raise DomainError(f"Mesh needs n_r >= 2 and n_theta >= 3, got {n_r}x{n_theta}")
    if not 0.0 < r_max < 1.0:
        raise DomainError(f"r_max must lie in (0, 1), got {r_max}")
    xi = np.arange(n_r) / (n_r - 1)
    r = r_max * (1.0 - (1.0 - xi) ** 2)
    eta = -1.0 + 2.0 * np.arange(n_theta) / n_theta
    theta = np.pi + np.pi * eta * np.abs(eta)
    z = np.concatenate([[0j], (r[1:, None] * np.exp(1j * theta[None, :])).ravel()])

    k = np.arange(n_theta)
    k_next = (k + 1) % n_theta
    fan = np.column_stack([np.zeros(n_theta, dtype=int), 1 + k, 1 + k_next])
    rings = []
    for i in range(1, n_r - 1):
        a, b = 1 + (i - 1) * n_theta + k, 1 + (i - 1) * n_theta + k_next
        c, d = a + n_theta, b + n_theta
        rings.append(np.column_stack([a, c, b]))
        rings.append(np.column_stack([b, c, d]))
    faces = np.vstack([fan] + rings)
    return PolarMesh(z=z, faces=faces, n_r=n_r, n_theta=n_theta)


def project(position: np.ndarray, mode: str = "drop", drop: int = 3) -> np.ndarray:
    """Project (N, 4) points of R^4 to R^3.

    drop removes one coordinate; stereographic projects from the pole
    (0, 0, 0, R) with R twice the largest norm.
    """
    position = np.asarray(position, dtype=float).reshape(-1, 4)
    if mode == "drop":
        if drop not in range(4):
            raise DomainError(f"drop must be 0..3, got {drop}")
        return np.delete(position, drop, axis=1)
    if mode == "stereographic":
        finite = np.isfinite(position).all(axis=1)
        norm = float(np.max(np.linalg.norm(position[finite], axis=1), initial=0.0))
        R = 2.0 * norm if norm > 0 else 1.0
        return position[:, :3] / (1.0 - position[:, 3:4] / R)
    raise DomainError(f"Unknown projection {mode!r}, expected one of {PROJECTIONS}")


def write_obj(path: Union[str, Path], vertices: np.ndarray, faces: np.ndarray, comment: str = "") -> Path:
    """Write a Wavefront OBJ file with 1-based triangle indices."""
    path = Path(path).expanduser()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            if comment:
                f.write(f"# {comment}\n")
            for x, y, w in np.nan_to_num(vertices):
                f.write(f"v {x:.{FLOAT_DIGITS}g} {y:.{FLOAT_DIGITS}g} {w:.{FLOAT_DIGITS}g}\n")
            for a, b, c in faces + 1:
                f.write(f"f {a} {b} {c}\n")
    except OSError as e:
        raise ExportError(f"Failed to write {path}: {e}") from e
    _LOGGER.debug("OBJ with %d vertices and %d faces written to %s", len(vertices), len(faces), path)
    return path


def write_angle_csv(path: Union[str, Path], angle: np.ndarray) -> Path:
    """Per-vertex Lagrangian angle as (vertex, angle_re, angle_im, angle_arg)."""
    angle = np.asarray(angle, dtype=complex).ravel()
    table = np.column_stack([np.arange(angle.size), angle.real, angle.imag, np.angle(angle)])
    return _write_table(path, "vertex,angle_re,angle_im,angle_arg", table)


def export_mesh(
    surface: BaseSurface,
    out_dir: Union[str, Path],
    n_r: int = 128,
    n_theta: int = 256,
    r_max: float = 0.999,
    projection: str = "drop",
    drop: int = 3,
) -> Dict[str, Any]:
    """Sample a surface on the polar mesh and write field CSV, OBJ and angle sidecar."""
    mesh = polar_mesh(n_r, n_theta, r_max)
    frame = surface.frame(mesh.z)
    out_dir = Path(out_dir).expanduser()
    field_path = write_field_csv(out_dir / f"{surface.name}_field.csv", frame)
    vertices = project(frame.position, projection, drop)
    obj_path = write_obj(
        out_dir / f"{surface.name}.obj", vertices, mesh.faces, comment=f"{surface.name} {projection}"
    )
    angle_path = write_angle_csv(out_dir / f"{surface.name}_angle.csv", frame.angle)
    _LOGGER.info("Mesh %dx%d written to %s", n_r, n_theta, out_dir)
    return {
        "vertices": mesh.vertex_count,
        "faces": int(mesh.faces.shape[0]),
        "field_csv": str(field_path),
        "obj": str(obj_path),
        "angle_csv": str(angle_path),
    }
