"""Command-line interface: generate, quality, verify and svg.

Reports go to stdout as JSON (sorted keys) or, for ``quality``, as a text
table. Logs go to stderr. Exit codes: 0 success, 2 configuration error,
3 numerical failure, 4 grid file or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from gridforge.config import get_settings
from gridforge.flux.fields import FluxField
from gridforge.flux.presets import load_field_from_dict
from gridforge.grids.models import StructuredGrid
from gridforge.io.gridfile import read_grid_file, write_grid_file
from gridforge.io.svg import emit_svg
from gridforge.pipeline import (
    RunConfig,
    load_run_config_from_dict,
    load_run_config_from_file,
    run,
)
from gridforge.quality.benchmarks import (
    BenchmarkReport,
    problem_from_name,
    run_benchmark_sweep,
    solve_benchmark,
)
from gridforge.quality.metrics import format_quality_table, quality_report
from gridforge.shared.errors import ConfigurationError, GridFileError, GridforgeError
from gridforge.shared.logging import get_logger, setup_logging

REPORT_SCHEMA_VERSION = "1"

# flag name -> RunConfig field
_RUN_FLAGS = {
    "flux": "flux",
    "psi0": "psi0",
    "psi1": "psi1",
    "grid_type": "grid_type",
    "nu": "n_u",
    "nv": "n_v",
    "k": "k",
    "eps": "eps",
    "weight": "weight",
    "first_line": "first_line",
    "placement": "placement",
    "out": "output",
    "svg": "svg",
}


def _render(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(payload: BaseModel | dict[str, Any], output: str | None = None) -> None:
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    rendered = _render({"schema_version": REPORT_SCHEMA_VERSION, **data})
    if output:
        Path(output).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)


def _run_config(args: argparse.Namespace) -> RunConfig:
    data: dict[str, Any] = {}
    if args.config:
        data = load_run_config_from_file(args.config).model_dump(mode="json")
    for flag, name in _RUN_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            data[name] = value
    return load_run_config_from_dict(data)


def _field_of(grid: StructuredGrid) -> FluxField:
    flux = grid.provenance.get("flux")
    if not isinstance(flux, dict):
        raise GridFileError("Grid file provenance does not record the flux field")
    return load_field_from_dict(flux)


def cmd_generate(args: argparse.Namespace) -> int:
    config = _run_config(args)
    result = run(config)
    summary = result.summary()
    if config.output:
        write_grid_file(result.grid, config.output)
        summary["output"] = config.output
    if config.svg:
        Path(config.svg).write_text(
            emit_svg(result.grid, args.stride, field=result.field), encoding="utf-8"
        )
        summary["svg"] = config.svg
    _emit(summary)
    return 0


def cmd_quality(args: argparse.Namespace) -> int:
    grid = read_grid_file(args.gridfile)
    report = quality_report(grid, name=args.name or Path(args.gridfile).stem)
    sys.stdout.write(format_quality_table([report]))
    if args.output:
        _emit(report, args.output)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    grid = read_grid_file(args.gridfile)
    field = _field_of(grid)
    problem = problem_from_name(args.problem, psi0=grid.psi0, psi1=grid.psi1)
    if args.sweep:
        try:
            cells = [int(part) for part in args.sweep.split(",") if part.strip()]
        except ValueError as exc:
            raise ConfigurationError(f"Invalid --sweep list '{args.sweep}'") from exc
        recorded = grid.provenance.get("run")
        if not isinstance(recorded, dict):
            raise GridFileError("Grid file provenance does not record the run configuration")
        base = load_run_config_from_dict(recorded)
        aspect = base.n_v // base.n_u

        def build(n: int) -> StructuredGrid:
            return run(base.model_copy(update={"n_u": n, "n_v": aspect * n})).grid

        _emit(run_benchmark_sweep(build, problem, field, cells), args.output)
        return 0
    result = solve_benchmark(grid, problem, field)
    report = BenchmarkReport(
        problem=problem.type,
        grid=grid.kind.value,
        n1=grid.n1,
        n2=grid.n2,
        error=result.error,
        iterations=result.iterations,
        residual=result.residual,
    )
    _emit(report, args.output)
    return 0


def cmd_svg(args: argparse.Namespace) -> int:
    grid = read_grid_file(args.gridfile)
    document = emit_svg(grid, args.stride, contours=not args.no_contours)
    if args.out:
        Path(args.out).write_text(document, encoding="utf-8")
    else:
        sys.stdout.write(document)
    return 0


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--error-json",
        action="store_true",
        help="Print failures as a JSON object on stdout",
    )
    common.add_argument("--log-level", default=settings.log_level, help="Log level for stderr")
    common.add_argument(
        "--log-format", default=settings.log_format, choices=["json", "text"], help="Log format"
    )

    parser = argparse.ArgumentParser(prog="gridforge", add_help=True)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", parents=[common], help="Generate a grid")
    gen.add_argument("--config", default=None, help="Run configuration JSON file")
    gen.add_argument("--flux", default=None, help="Field preset id or field JSON file")
    gen.add_argument("--psi0", type=float, default=None)
    gen.add_argument("--psi1", type=float, default=None)
    gen.add_argument(
        "--type",
        dest="grid_type",
        default=None,
        choices=["orthogonal", "conformal", "adapted", "monitor"],
    )
    gen.add_argument("--nu", type=int, default=None, help="Radial cells")
    gen.add_argument("--nv", type=int, default=None, help="Poloidal cells")
    gen.add_argument("--k", type=float, default=None, help="Monitor anisotropy")
    gen.add_argument("--eps", type=float, default=None, help="Monitor isotropic floor")
    gen.add_argument("--weight", default=None, choices=["unity", "grad_psi"])
    gen.add_argument("--first-line", default=None, choices=["inner", "outer"])
    gen.add_argument("--placement", default=None, choices=["centers", "vertices"])
    gen.add_argument("--out", default=None, help="Grid file to write")
    gen.add_argument("--svg", default=None, help="SVG file to write next to the grid")
    gen.add_argument("--stride", type=int, default=1, help="SVG line stride")
    gen.set_defaults(handler=cmd_generate)

    qual = sub.add_parser("quality", parents=[common], help="Grid quality report")
    qual.add_argument("gridfile")
    qual.add_argument("--name", default=None, help="Row label in the table")
    qual.add_argument("--output", default=None, help="Write the JSON report to this path")
    qual.set_defaults(handler=cmd_quality)

    ver = sub.add_parser("verify", parents=[common], help="Solve a benchmark problem")
    ver.add_argument("gridfile")
    ver.add_argument("--problem", default="flux_aligned", choices=["flux_aligned", "localized"])
    ver.add_argument("--sweep", default=None, help="Comma-separated radial cell counts")
    ver.add_argument("--output", default=None, help="Write the JSON report to this path")
    ver.set_defaults(handler=cmd_verify)

    svg = sub.add_parser("svg", parents=[common], help="Render a grid file as SVG")
    svg.add_argument("gridfile")
    svg.add_argument("--stride", type=int, default=1)
    svg.add_argument("--out", default=None, help="SVG path (default: stdout)")
    svg.add_argument("--no-contours", action="store_true", help="Skip the psi contours")
    svg.set_defaults(handler=cmd_svg)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, GridforgeError):
        return exc.exit_code
    if isinstance(exc, OSError):
        return 4
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_format)
    logger = get_logger(__name__)

    try:
        code: int = args.handler(args)
        return code
    except (GridforgeError, OSError) as exc:
        exit_code = _exit_code(exc)
        logger.error("Command failed", command=args.command, error=str(exc), exit_code=exit_code)
        if args.error_json:
            sys.stdout.write(
                _render(
                    {
                        "schema_version": REPORT_SCHEMA_VERSION,
                        "error": str(exc),
                        "error_type": type(exc).__name__,
                        "exit_code": exit_code,
                    }
                )
            )
        else:
            sys.stderr.write(f"gridforge {args.command}: {exc}\n")
        return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
