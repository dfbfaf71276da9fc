#!/usr/bin/env python3
"""
swlag CLI - numerical companion for the Hamiltonian stationary Lagrangian disc
with Schoen-Wolfson singularities accumulating at z = -1.

Every command reads a JSON run configuration and writes a versioned JSON
report to the output directory.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional

from swlag import ConfigError, RunConfig, SwlagError
from swlag.commands import cmd_classify, cmd_eval, cmd_mesh, cmd_norms, cmd_poisson, cmd_verify
from swlag.config import LOG_LEVEL, OUT_DIR, THREADS
from swlag.const import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_RESIDUAL_FAILURE
from swlag.export import ReportStorage, build_report
from swlag.models import COMMANDS

# Set up logging
log_level = getattr(logging, LOG_LEVEL.upper(), logging.INFO)
logging.basicConfig(
    level=log_level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
_LOGGER = logging.getLogger(__name__)


def print_table(headers: List[str], rows: List[List[Any]]) -> None:
    """Print data in a formatted table."""
    widths = [len(str(h)) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))

    header_line = " | ".join(str(h).ljust(w) for h, w in zip(headers, widths))
    print(header_line)
    print("-" * len(header_line))

    for row in rows:
        print(" | ".join(str(c).ljust(w) for c, w in zip(row, widths)))


def load_config(path: Optional[str]) -> RunConfig:
    """Read and validate a JSON run configuration."""
    if path is None:
        return RunConfig.from_json({})
    try:
        with open(Path(path).expanduser(), "r") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read configuration {path}: {e}") from e
    except ValueError as e:
        raise ConfigError(f"Configuration {path} is not valid JSON: {e}") from e
    return RunConfig.from_json(data)


def _fmt(value: Any) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, complex):
        return f"{value.real:.6g}{value.imag:+.6g}i"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def run_command(command: str, config: RunConfig, out_dir: str, threads: int) -> int:
    """Run one command, store its report and return the exit code."""
    storage = ReportStorage(out_dir)
    exit_code = EXIT_OK
    passed = None

    if command == "eval":
        samples = cmd_eval(config)
        print_table(
            ["z", "Phi", "conf_factor", "angle"],
            [[_fmt(s.z), ", ".join(_fmt(x) for x in s.Phi), _fmt(s.conf_factor), _fmt(s.angle)] for s in samples],
        )
        result: Any = samples
    elif command == "verify":
        result, exit_code = cmd_verify(config, threads)
        passed = exit_code == EXIT_OK
        print_table(
            ["check", "max", "tolerance", "passed"],
            [
                [name, _fmt(section["max"]), _fmt(section["tolerance"]), section["passed"]]
                for name, section in result["sections"].items()
            ],
        )
    elif command == "norms":
        result = cmd_norms(config)
        print(f"W^(1,{config.p}) estimate: {_fmt(result['w1p']['estimate'])}")
        print(f"Damping integral: {_fmt(result['damping']['lhs'])} (exact {_fmt(result['damping']['exact'])})")
    elif command == "classify":
        result = cmd_classify(config, threads=threads)
        print_table(
            ["center", "status", "j", "slope"],
            [
                [_fmt(complex(*r["center"])), r["status"], _fmt(r.get("inferred_j")), _fmt(r.get("scaling_slope"))]
                for r in result
            ],
        )
    elif command == "poisson":
        result = cmd_poisson(config)
        print_table(["r", "sup |1 - |P_r * g||"], [[_fmt(r), _fmt(d)] for r, d in result["g_profile"]])
        print(f"Constant-trace defect of G: {_fmt(result['constant_trace_defect'])}")
    elif command == "mesh":
        result = cmd_mesh(config, out_dir)
        print(f"Mesh with {result['vertices']} vertices written to {result['obj']}")
    else:
        raise ConfigError(f"Unknown command: {command}")

    path = storage.save(command, build_report(command, config, result, passed))
    print(f"Report written to {path}")
    return exit_code


def main() -> int:
    """Main CLI entry point."""
    parser = argparse.ArgumentParser(
        description="swlag - Hamiltonian stationary Lagrangian disc with Schoen-Wolfson singularities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s verify --config run.json
  %(prog)s eval --config run.json --out results
  %(prog)s classify --config run.json --threads 4
  %(prog)s mesh --config run.json --out meshes

Exit codes: 0 pass, 1 residual failure, 2 configuration error.
""",
    )
    parser.add_argument("command", choices=COMMANDS, help="Command to run")
    parser.add_argument("--config", "-c", metavar="FILE", help="JSON run configuration")
    parser.add_argument("--out", "-o", default=OUT_DIR, metavar="DIR", help="Output directory")
    parser.add_argument("--threads", "-t", type=int, default=THREADS, help="Worker threads")
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Enable verbose logging"
    )

    args = parser.parse_args()

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        config = load_config(args.config)
        return run_command(args.command, config, args.out, max(1, args.threads))
    except ConfigError as e:
        _LOGGER.error("Configuration error: %s", e)
        print(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except SwlagError as e:
        _LOGGER.error("%s failed: %s", args.command, e)
        print(f"Error: {e}")
        return EXIT_RESIDUAL_FAILURE


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n\nInterrupted by user")
        sys.exit(0)
