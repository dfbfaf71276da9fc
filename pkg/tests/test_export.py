"""Tests for report and mesh output."""

import json
import math

import numpy as np
import pytest

from swlag.const import REPORT_SCHEMA
from swlag.exceptions import ConfigError, DomainError
from swlag.export import (
    ReportStorage,
    build_report,
    dumps_report,
    export_mesh,
    polar_mesh,
    project,
    to_jsonable,
    write_obj,
)
from swlag.models import RunConfig
from swlag.surfaces import ConeSurface, get_surface


def test_to_jsonable():
    value = to_jsonable(
        {
            "a": np.float64(1.5),
            "b": complex(1, 2),
            "c": math.inf,
            "d": np.array([1, 2]),
            "e": (True, np.int64(3)),
            1: math.nan,
        }
    )
    assert value == {"a": 1.5, "b": [1.0, 2.0], "c": None, "d": [1, 2], "e": [True, 3], "1": None}


def test_dumps_report_is_deterministic():
    first = dumps_report({"b": 0.1 + 0.2, "a": [1, 2]})
    second = dumps_report({"a": [1, 2], "b": 0.1 + 0.2})
    assert first == second
    assert first.endswith("\n")
    assert json.loads(first)["b"] == 0.1 + 0.2


def test_build_report():
    report = build_report("eval", RunConfig(), {"x": 1}, passed=True)
    assert report["schema"] == REPORT_SCHEMA
    assert report["command"] == "eval"
    assert report["config"]["s"] == 0.25
    assert report["passed"] is True
    assert "passed" not in build_report("eval", RunConfig(), {})


def test_report_storage(tmp_path):
    storage = ReportStorage(tmp_path / "out")
    report = build_report("poisson", RunConfig(), {"defect": 0.5})
    path = storage.save("poisson", report)
    assert path.exists()
    assert path == storage.path("poisson")
    assert json.loads(path.read_text()) == to_jsonable(report)


def test_report_storage_overwrites(tmp_path):
    storage = ReportStorage(tmp_path)
    storage.save("verify", build_report("verify", RunConfig(), {"max": 1.0}, passed=False))
    path = storage.save("verify", build_report("verify", RunConfig(), {"max": 1e-9}, passed=True))
    assert json.loads(path.read_text())["passed"] is True
    assert sorted(p.name for p in tmp_path.iterdir()) == ["verify.json"]


def test_polar_mesh_layout():
    mesh = polar_mesh(128, 256)
    assert mesh.vertex_count == 1 + 127 * 256 == 32513
    assert mesh.faces.shape == (256 + 2 * 256 * 126, 3)
    assert mesh.faces.min() >= 0 and mesh.faces.max() < mesh.vertex_count
    assert np.max(np.abs(mesh.z)) == pytest.approx(0.999)
    assert mesh.z[0] == 0
    assert np.count_nonzero(mesh.z == 0) == 1
    assert np.unique(mesh.faces).size == mesh.vertex_count


def test_polar_mesh_closes_disc():
    mesh = polar_mesh(4, 6)
    assert mesh.vertex_count == 19
    edges = np.sort(np.concatenate([mesh.faces[:, [0, 1]], mesh.faces[:, [1, 2]], mesh.faces[:, [2, 0]]]), axis=1)
    _, counts = np.unique(edges, axis=0, return_counts=True)
    assert set(counts.tolist()) == {1, 2}
    assert np.count_nonzero(counts == 1) == 6
    assert np.all(mesh.faces[:6, 0] == 0)


def test_polar_mesh_rejects():
    with pytest.raises(DomainError):
        polar_mesh(1, 16)
    with pytest.raises(DomainError):
        polar_mesh(8, 16, r_max=1.0)


def test_project():
    position = np.array([[1.0, 2.0, 3.0, 4.0], [0.0, 0.0, 0.0, 0.0]])
    assert project(position, drop=0).tolist() == [[2.0, 3.0, 4.0], [0.0, 0.0, 0.0]]
    stereo = project(position, "stereographic")
    assert stereo.shape == (2, 3)
    assert stereo[1].tolist() == [0.0, 0.0, 0.0]
    with pytest.raises(DomainError):
        project(position, drop=4)
    with pytest.raises(DomainError):
        project(position, "orthographic")


def test_write_obj(tmp_path):
    vertices = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    path = write_obj(tmp_path / "tri.obj", vertices, np.array([[0, 1, 2]]), comment="triangle")
    lines = path.read_text().splitlines()
    assert lines[0] == "# triangle"
    assert sum(line.startswith("v ") for line in lines) == 3
    assert lines[-1] == "f 1 2 3"


def test_export_mesh(tmp_path):
    result = export_mesh(ConeSurface.from_params(1, 2), tmp_path, n_r=8, n_theta=16)
    assert result["vertices"] == 1 + 7 * 16
    assert result["faces"] == 16 + 2 * 16 * 6
    header = open(result["field_csv"]).readline().strip()
    assert header == "x,y,phi1,phi2,phi3,phi4,angle_re,angle_im,conf_factor"
    obj_lines = open(result["obj"]).read().splitlines()
    assert sum(line.startswith("f ") for line in obj_lines) == result["faces"]
    assert len(open(result["angle_csv"]).read().splitlines()) == result["vertices"] + 1


def test_surface_registry():
    assert get_surface("cone", p=2, q=3).describe() == {"name": "cone", "p": 2, "q": 3}
    with pytest.raises(ConfigError):
        get_surface("sphere")
