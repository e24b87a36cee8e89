"""Command-line front end (``cpinfer``).

Subcommands: ``detect`` (CSV in, intervals out), ``simulate`` (coverage / performance
experiments), ``thresholds`` (extreme-value constants), ``bench`` (scaling check) and ``serve``
(the HTTP API). Results go to stdout, logs to stderr. Failures print
``{"error": code, "detail": message}`` and exit with 2 for bad options or configuration and 1
for runtime errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn, TextIO

import pandas as pd
from pydantic import TypeAdapter, ValidationError

from app.core.config import settings
from app.core.exceptions import (
    ChangePointError,
    ParameterError,
    SignalSpecError,
    UnsupportedDegreeError,
)
from app.models import (
    ArInnovation,
    Calibration,
    Estimator,
    Method,
    NoiseKind,
    OutputFormat,
    Selection,
    SignalKind,
)
from app.schemas.cli import MODE_ALIASES, CliConfig
from app.schemas.detection import BenchRow, DetectionResponse, default_min_scale
from app.schemas.experiment import (
    CoverageExperimentSpec,
    ExperimentReport,
    PerformanceExperimentSpec,
    SignalSpec,
)
from app.schemas.threshold import ThresholdParams
from app.services.detection_service import (
    BENCH_SIZES,
    bench,
    build_detection_response,
    detect_csv,
    plot_data_frame,
)
from app.services.experiment_service import (
    ExperimentRunner,
    load_experiment_spec,
    report_frame,
    run_experiment,
    write_report,
)
from app.services.thresholds import threshold_diagnostics

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

# Errors caused by the options rather than by the data.
_USAGE_ERRORS = (ParameterError, UnsupportedDegreeError, SignalSpecError)

_BENCH_ROWS = TypeAdapter(list[BenchRow])


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""

    code = "usage_error"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _mode(value: str) -> str:
    key = value.lower()
    if key in MODE_ALIASES:
        return MODE_ALIASES[key].value
    if key in {m.value for m in MODE_ALIASES.values()}:
        return key
    raise argparse.ArgumentTypeError(f"mode must be gauss or dep, got {value!r}")


def _add_detection_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--degree", "-p", type=int, default=0, help="polynomial degree p")
    parser.add_argument("--alpha", type=float, default=settings.DEFAULT_ALPHA)
    parser.add_argument("--decay", "-a", type=float, default=settings.DEFAULT_DECAY)
    parser.add_argument("--min-scale", "-W", type=int, default=None, help="minimum grid scale")
    parser.add_argument("--mode", type=_mode, default=None, help="gauss or dep")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with every subcommand."""
    parser = _Parser(prog="cpinfer", description="Change point inference with uniform coverage")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    det = sub.add_parser("detect", help="detect significant intervals in a CSV column")
    det.add_argument("--input", "-i", type=Path, required=True)
    det.add_argument("--column", "-c", default=None, help="header name or 0-based index")
    _add_detection_options(det)
    det.add_argument("--estimator", choices=[e.value for e in Estimator], default=None)
    det.add_argument("--method", choices=[m.value for m in Method], default=None)
    det.add_argument("--lrv-block", type=int, default=None, help="long-run variance block size")
    det.add_argument("--sigma", type=float, default=None, help="known noise scale")
    det.add_argument(
        "--calibration", choices=[c.value for c in Calibration], default=Calibration.FWE.value
    )
    det.add_argument(
        "--selection", choices=[s.value for s in Selection], default=Selection.FIRST.value
    )
    det.add_argument("--segment", type=int, nargs=2, metavar=("S", "E"), default=None)
    det.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value
    )
    det.add_argument("--plot-data", type=Path, default=None, help="write t,y,interval_id,eta_flag")
    det.add_argument(
        "--seed", type=int, default=0, help="accepted for scripts; detect is deterministic"
    )

    sim = sub.add_parser("simulate", help="run a coverage or performance experiment")
    sim.add_argument("--spec", type=Path, default=None, help="YAML experiment spec")
    sim.add_argument("--kind", choices=["coverage", "performance"], default="coverage")
    sim.add_argument("--n", type=int, default=750)
    sim.add_argument("--reps", type=int, default=500)
    sim.add_argument("--alpha", type=float, default=settings.DEFAULT_ALPHA)
    sim.add_argument("--decay", type=float, default=settings.DEFAULT_DECAY)
    sim.add_argument("--method", action="append", choices=[m.value for m in Method])
    sim.add_argument("--noise", action="append", choices=[k.value for k in NoiseKind])
    sim.add_argument("--degree", action="append", type=int)
    sim.add_argument(
        "--signal", choices=[k.value for k in SignalKind if k is not SignalKind.CUSTOM],
        default=SignalKind.BLOCKS.value,
    )
    sim.add_argument("--sigma", type=float, default=None)
    sim.add_argument(
        "--ar-innovation", choices=[r.value for r in ArInnovation], default=None
    )
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument(
        "--format", choices=[OutputFormat.JSON.value, OutputFormat.CSV.value], default="json"
    )
    sim.add_argument("--output", "-o", type=Path, default=None, help=".csv or .json report")

    thr = sub.add_parser("thresholds", help="print extreme-value constants and lambda_alpha")
    thr.add_argument("--n", type=int, required=True)
    _add_detection_options(thr)

    ben = sub.add_parser("bench", help="time full-grid scans at increasing n")
    ben.add_argument("--sizes", type=int, nargs="+", default=list(BENCH_SIZES))
    ben.add_argument("--degree", "-p", type=int, default=0)
    ben.add_argument("--decay", "-a", type=float, default=None)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value
    )

    srv = sub.add_parser("serve", help="run the HTTP API")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _emit_error(code: str, detail: Any, out: TextIO) -> None:
    out.write(json.dumps({"error": code, "detail": detail}, default=str) + "\n")


def _write_detection(response: DetectionResponse, fmt: OutputFormat, out: TextIO) -> None:
    if fmt is OutputFormat.JSON:
        out.write(response.model_dump_json(by_alias=True, indent=2) + "\n")
    elif fmt is OutputFormat.CSV:
        columns = ["start", "end", "width", "stat", "eta_hat", "midpoint_fallback"]
        rows = [iv.model_dump(include=set(columns)) for iv in response.intervals]
        pd.DataFrame(rows, columns=columns).to_csv(out, index=False)
    else:
        lam = "inf" if response.lambda_value is None else f"{response.lambda_value:.6g}"
        out.write(
            f"n={response.n} sigma_hat={response.sigma_hat:.6g} "
            f"lambda={lam} mode={response.mode.value} "
            f"W={response.params.min_scale}\n"
        )
        out.write(f"{response.n_intervals} significant interval(s)\n")
        for iv in response.intervals:
            eta = "-" if iv.eta_hat is None else str(iv.eta_hat)
            out.write(f"  [{iv.start}, {iv.end}] width={iv.width} |D|={iv.stat:.4f} eta={eta}\n")


def run_detect_command(cfg: CliConfig, out: TextIO) -> int:
    """Ingest, detect and write the result (and optional plot data)."""
    detection = cfg.detection_config()
    ts, result = detect_csv(cfg.input, detection, cfg.column)
    _write_detection(build_detection_response(result), cfg.format, out)
    if cfg.plot_data is not None:
        plot_data_frame(ts, result).to_csv(cfg.plot_data, index=False)
        logger.info("plot data written to %s", cfg.plot_data)
    return EXIT_OK


def run_thresholds_command(cfg: CliConfig, n: int, out: TextIO) -> int:
    """Print the threshold diagnostics as JSON."""
    mode = cfg.mode or MODE_ALIASES["gauss"]
    params = ThresholdParams(
        n=n,
        min_scale=cfg.min_scale or default_min_scale(n, mode),
        decay=cfg.decay,
        degree=cfg.degree,
        alpha=cfg.alpha,
        mode=mode,
    )
    out.write(threshold_diagnostics(params).model_dump_json(indent=2) + "\n")
    return EXIT_OK


def _simulation_spec(
    args: argparse.Namespace,
) -> CoverageExperimentSpec | PerformanceExperimentSpec:
    if args.spec is not None:
        return load_experiment_spec(args.spec)
    fields: dict[str, Any] = {
        "replications": args.reps,
        "alpha": args.alpha,
        "decay": args.decay,
        "seed": args.seed,
        "workers": args.workers,
        "methods": args.method,
        "noise": args.noise,
        "sigma": args.sigma,
        "ar_innovation": args.ar_innovation,
    }
    if args.kind == "coverage":
        fields.update(n=args.n, degrees=args.degree)
        model: type[CoverageExperimentSpec | PerformanceExperimentSpec] = CoverageExperimentSpec
    else:
        fields.update(
            signal=SignalSpec(kind=SignalKind(args.signal)),
            degree=args.degree[0] if args.degree else None,
        )
        model = PerformanceExperimentSpec
    return model(**{k: v for k, v in fields.items() if v is not None})


def run_simulate_command(args: argparse.Namespace, out: TextIO) -> int:
    """Run an experiment, print the report and optionally write it to a file."""
    spec = _simulation_spec(args)
    report: ExperimentReport = run_experiment(spec, ExperimentRunner(spec.workers))
    if args.output is not None:
        write_report(report, args.output)
    if args.format == OutputFormat.CSV.value:
        report_frame(report).to_csv(out, index=False)
    else:
        out.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def run_bench_command(args: argparse.Namespace, out: TextIO) -> int:
    """Print the benchmark rows."""
    rows: list[BenchRow] = bench(args.sizes, degree=args.degree, decay=args.decay, seed=args.seed)
    fmt = OutputFormat(args.format)
    if fmt is OutputFormat.JSON:
        out.write(_BENCH_ROWS.dump_json(rows, indent=2).decode() + "\n")
    elif fmt is OutputFormat.CSV:
        pd.DataFrame([row.model_dump() for row in rows]).to_csv(out, index=False)
    else:
        for row in rows:
            ratio = "-" if row.ratio is None else f"{row.ratio:.2f}"
            out.write(
                f"n={row.n} grid={row.grid_size} evaluations={row.evaluations} "
                f"time={row.elapsed:.3f}s ratio={ratio}\n"
            )
    return EXIT_OK


def run_serve_command(args: argparse.Namespace) -> int:
    """Serve the HTTP API with uvicorn."""
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, log_level=settings.LOG_LEVEL.lower())
    return EXIT_OK


def _cli_config(args: argparse.Namespace) -> CliConfig:
    fields = {
        k: v
        for k, v in vars(args).items()
        if k in CliConfig.model_fields and v is not None
    }
    if fields.get("segment") is not None:
        fields["segment"] = tuple(fields["segment"])
    return CliConfig(**fields)


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    """Parse arguments, dispatch and map failures to exit codes.

    Returns:
        0 on success (whether or not intervals were found), 2 for bad options or
        configuration, 1 for runtime errors
    """
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _emit_error(UsageError.code, str(exc), out)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.subcommand == "detect":
            return run_detect_command(_cli_config(args), out)
        if args.subcommand == "thresholds":
            return run_thresholds_command(_cli_config(args), args.n, out)
        if args.subcommand == "simulate":
            return run_simulate_command(args, out)
        if args.subcommand == "bench":
            return run_bench_command(args, out)
        return run_serve_command(args)
    except ValidationError as exc:
        _emit_error("validation_error", exc.errors(include_url=False, include_context=False), out)
        return EXIT_USAGE
    except _USAGE_ERRORS as exc:
        _emit_error(exc.code, str(exc), out)
        return EXIT_USAGE
    except ChangePointError as exc:
        _emit_error(exc.code, str(exc), out)
        return EXIT_RUNTIME
    except OSError as exc:
        _emit_error("io_error", str(exc), out)
        return EXIT_RUNTIME


def run() -> NoReturn:
    """Console script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
