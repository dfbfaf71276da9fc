"""Tests for the command layer and the CLI entry point."""

import json
import sys

import pytest

import swlag_cli
from swlag.commands import cmd_classify, cmd_eval, cmd_mesh, cmd_norms, cmd_poisson, cmd_verify
from swlag.const import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_RESIDUAL_FAILURE, REPORT_SCHEMA
from swlag.cx_core import zero_location
from swlag.exceptions import ConfigError
from swlag.models import RunConfig


def test_cmd_eval():
    p1 = zero_location(1)
    origin, zero = cmd_eval(RunConfig.from_json({"K": 60}), [[0.0, 0.0], [p1, 0.0]])
    assert origin.conf_factor > 0
    assert abs(origin.require_angle()) == pytest.approx(1.0)
    assert zero.conf_factor == 0.0
    assert zero.angle is None


def test_cmd_classify():
    config = RunConfig.from_json({"K": 60, "classify": {"centers": [[zero_location(1), 0.0], [0.3, 0.0]]}})
    first, second = cmd_classify(config, threads=2)
    assert first["status"] == "classified"
    assert first["inferred_j"] == 1
    assert second["status"] == "inconclusive"
    assert second["center"] == [0.3, 0.0]


def test_cmd_poisson():
    config = RunConfig.from_json({"K": 60, "poisson": {"M": 256, "radii": [0.9, 0.95]}})
    result = cmd_poisson(config)
    assert result["M"] == 256
    assert [r for r, _ in result["g_profile"]] == [0.9, 0.95]
    assert result["constant_trace_defect"] > 0.4
    assert result["monomial_trace_defect"] <= 1e-12


def test_cmd_mesh(tmp_path):
    config = RunConfig.from_json({"grid": {"n_r": 6, "n_theta": 12}, "mesh": {"surface": "cone", "q": 3}})
    result = cmd_mesh(config, tmp_path)
    assert result["vertices"] == 1 + 5 * 12
    assert result["obj"].endswith("cone.obj")


def test_load_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text("{broken")
    with pytest.raises(ConfigError):
        swlag_cli.load_config(str(path))
    with pytest.raises(ConfigError):
        swlag_cli.load_config(str(tmp_path / "missing.json"))
    assert swlag_cli.load_config(None).s == 0.25


def test_main_config_error(tmp_path, monkeypatch):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"s": 0.4, "p": 1.5}))
    monkeypatch.setattr(sys, "argv", ["swlag", "eval", "--config", str(path), "--out", str(tmp_path)])
    assert swlag_cli.main() == EXIT_CONFIG_ERROR


def test_main_writes_report(tmp_path, monkeypatch):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"K": 60, "eval": {"points": [[0.1, 0.2]]}}))
    out = tmp_path / "out"
    monkeypatch.setattr(sys, "argv", ["swlag", "eval", "-c", str(path), "-o", str(out)])
    assert swlag_cli.main() == EXIT_OK
    report = json.loads((out / "eval.json").read_text())
    assert report["schema"] == REPORT_SCHEMA
    assert report["command"] == "eval"
    assert report["result"][0]["z"] == [0.1, 0.2]


def test_cmd_verify_small():
    config = RunConfig.from_json(
        {
            "K": 60,
            "verify": {"points": 50, "cells": 4, "singular_cells": 2, "winding_zeros": 2, "winding_free": 2},
        }
    )
    result, exit_code = cmd_verify(config, threads=2)
    sections = result["sections"]
    for name in ("conformal_inner", "conformal_norms", "lagrangian", "quaternionic", "gradient_identity"):
        assert sections[name]["passed"]
        assert sections[name]["count"] == 50
    assert sections["delta_mass"]["passed"]
    assert sections["winding"]["passed"]
    assert len(sections["winding"]["circles"]) == 4
    assert "weak div(g grad u)" in sections
    passed = all(section["passed"] for section in sections.values())
    assert exit_code == (EXIT_OK if passed else EXIT_RESIDUAL_FAILURE)


@pytest.mark.slow
def test_cmd_norms():
    result = cmd_norms(RunConfig.from_json({"K": 60, "norms": {"dipole_k": [1, 2]}}))
    assert result["damping"]["ok"]
    assert sorted(result["dipole"]) == ["1", "2"]
    assert all(entry["vanishes"] for entry in result["infinite_order_zero"])
    assert [entry["delta"] for entry in result["boundary_traces"]] == [0.0, 0.5, 1.0]
    assert isinstance(result["warnings"], list)
