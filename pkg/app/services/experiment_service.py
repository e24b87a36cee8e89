"""Seeded Monte Carlo coverage and performance experiments."""

from __future__ import annotations

import logging
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pandas as pd
import yaml
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ParameterError
from app.models import Method, NoiseKind, TimeSeries
from app.schemas.detection import DetectionConfig
from app.schemas.experiment import (
    CoverageExperimentSpec,
    ExperimentReport,
    NoiseSpec,
    PerformanceExperimentSpec,
    ReportRow,
)
from app.services.noise import gen_noise
from app.services.search import detect
from app.services.signals import change_points, gen_signal, signal_degree

logger = logging.getLogger(__name__)


class ReplicationTask(NamedTuple):
    """Everything one replication needs; picklable for worker processes."""

    root_seed: int
    cell_index: int
    replication: int
    n: int
    mean: np.ndarray | None
    noise: NoiseSpec
    config: DetectionConfig
    change_points: tuple[int, ...]


class ReplicationOutcome(NamedTuple):
    """Per-replication counts; aggregation only sums these."""

    n_intervals: int
    n_genuine: int
    total_length: int
    covered: bool


class Cell(NamedTuple):
    """One table cell of an experiment."""

    method: Method
    noise: NoiseKind
    degree: int


def replication_rng(root_seed: int, cell_index: int, replication: int) -> np.random.Generator:
    """Generator for one replication, keyed by (root seed, cell, replication)."""
    return np.random.default_rng([root_seed, cell_index, replication])


def run_replication(task: ReplicationTask) -> ReplicationOutcome:
    """Simulate one series, detect, and score the intervals against the true change points.

    Module level so the process pool can pickle it.
    """
    rng = replication_rng(task.root_seed, task.cell_index, task.replication)
    y = gen_noise(task.noise, task.n, rng)
    if task.mean is not None:
        y = y + task.mean
    result = detect(TimeSeries(y), task.config)

    genuine = sum(
        any(interval.contains(theta) for theta in task.change_points)
        for interval in result.intervals
    )
    length = sum(interval.width for interval in result.intervals)
    count = len(result.intervals)
    return ReplicationOutcome(
        n_intervals=count, n_genuine=genuine, total_length=length, covered=genuine == count
    )


def resolve_workers(requested: int | None) -> int:
    """Worker count: the request (or CPU count) capped by CPINFER_THREADS."""
    available = os.cpu_count() or 1
    cap = settings.CPINFER_THREADS or available
    workers = min(requested or available, cap)
    if requested is not None and requested > workers:
        logger.warning("requested %d workers, clamped to %d", requested, workers)
    return max(1, workers)


class ExperimentRunner:
    """Fan replications out over worker processes.

    Results come back in task order, so reports do not depend on the worker count.
    """

    def __init__(self, workers: int | None = None) -> None:
        """Initialize runner.

        Args:
            workers: Requested worker count; None uses every allowed CPU
        """
        self.workers = resolve_workers(workers)

    def map(self, tasks: Sequence[ReplicationTask]) -> list[ReplicationOutcome]:
        """Run every task and return the outcomes in task order."""
        if self.workers == 1 or len(tasks) < 2:
            return [run_replication(task) for task in tasks]
        chunksize = max(1, len(tasks) // (self.workers * 4))
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(run_replication, tasks, chunksize=chunksize))


def _cells(
    methods: Iterable[Method], noise: Iterable[NoiseKind], degrees: Iterable[int]
) -> list[Cell]:
    return [Cell(m, k, p) for m in methods for k in noise for p in degrees]


def _aggregate(
    cell: Cell, n: int, outcomes: Sequence[ReplicationOutcome], *, performance: bool
) -> ReportRow:
    reps = len(outcomes)
    empty = sum(1 for o in outcomes if o.n_intervals == 0)
    total_intervals = sum(o.n_intervals for o in outcomes)
    row = ReportRow(
        method=cell.method,
        noise=cell.noise,
        degree=cell.degree,
        n=n,
        replications=reps,
        coverage=empty / reps,
        mean_intervals=total_intervals / reps,
        empty_runs=empty,
    )
    if not performance:
        return row
    return row.model_copy(
        update={
            "coverage": sum(o.covered for o in outcomes) / reps,
            "no_genuine": sum(o.n_genuine for o in outcomes) / reps,
            # Empty runs count as fully genuine.
            "prop_genuine": sum(
                o.n_genuine / o.n_intervals if o.n_intervals else 1.0 for o in outcomes
            )
            / reps,
            "mean_length": (
                sum(o.total_length for o in outcomes) / total_intervals
                if total_intervals
                else None
            ),
        }
    )


def _run_cells(
    cells: list[Cell],
    make_task: Callable[[int, Cell, int], ReplicationTask],
    replications: int,
    n: int,
    runner: ExperimentRunner,
    *,
    performance: bool,
) -> list[ReportRow]:
    tasks = [
        make_task(index, cell, rep)
        for index, cell in enumerate(cells)
        for rep in range(replications)
    ]
    outcomes = runner.map(tasks)
    rows = []
    for index, cell in enumerate(cells):
        chunk = outcomes[index * replications : (index + 1) * replications]
        row = _aggregate(cell, n, chunk, performance=performance)
        logger.info(
            "cell %s/%s/p=%d: coverage=%.3f over %d replications",
            cell.method.value,
            cell.noise.value,
            cell.degree,
            row.coverage,
            replications,
        )
        rows.append(row)
    return rows


def coverage_experiment(
    spec: CoverageExperimentSpec, runner: ExperimentRunner | None = None
) -> ExperimentReport:
    """Share of pure-noise replications with no interval, per (method, noise, degree)."""
    runner = runner or ExperimentRunner(spec.workers)
    cells = _cells(spec.methods, spec.noise, spec.degrees)

    def make_task(index: int, cell: Cell, rep: int) -> ReplicationTask:
        return ReplicationTask(
            root_seed=spec.seed,
            cell_index=index,
            replication=rep,
            n=spec.n,
            mean=None,
            noise=NoiseSpec(
                kind=cell.noise, sigma=spec.sigma, phi=spec.phi, ar_innovation=spec.ar_innovation
            ),
            config=DetectionConfig(
                method=cell.method,
                degree=cell.degree,
                alpha=spec.alpha,
                decay=spec.decay,
                threshold=spec.threshold,
                localize=False,
            ),
            change_points=(),
        )

    rows = _run_cells(cells, make_task, spec.replications, spec.n, runner, performance=False)
    return ExperimentReport(
        kind="coverage",
        replications=spec.replications,
        seed=spec.seed,
        rows=rows,
        config=spec.model_dump(mode="json"),
    )


def performance_experiment(
    spec: PerformanceExperimentSpec, runner: ExperimentRunner | None = None
) -> ExperimentReport:
    """Genuine-interval metrics on a test signal, per (method, noise)."""
    runner = runner or ExperimentRunner(spec.workers)
    mean = gen_signal(spec.signal).values
    theta = change_points(spec.signal)
    degree = spec.degree if spec.degree is not None else signal_degree(spec.signal)
    n = mean.size
    cells = _cells(spec.methods, spec.noise, [degree])

    def make_task(index: int, cell: Cell, rep: int) -> ReplicationTask:
        return ReplicationTask(
            root_seed=spec.seed,
            cell_index=index,
            replication=rep,
            n=n,
            mean=mean,
            noise=NoiseSpec(
                kind=cell.noise, sigma=spec.sigma, phi=spec.phi, ar_innovation=spec.ar_innovation
            ),
            config=DetectionConfig(
                method=cell.method,
                degree=cell.degree,
                alpha=spec.alpha,
                decay=spec.decay,
                localize=False,
            ),
            change_points=theta,
        )

    rows = _run_cells(cells, make_task, spec.replications, n, runner, performance=True)
    return ExperimentReport(
        kind="performance",
        replications=spec.replications,
        seed=spec.seed,
        rows=rows,
        change_points=list(theta),
        config=spec.model_dump(mode="json"),
    )


def load_experiment_spec(path: Path) -> CoverageExperimentSpec | PerformanceExperimentSpec:
    """Read an experiment spec from YAML; the ``kind`` key picks coverage or performance.

    Raises:
        ParameterError: If the file cannot be read or does not validate
    """
    try:
        with Path(path).open(encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ParameterError(f"cannot read experiment spec {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"experiment spec {path} must hold a mapping")
    kind = data.pop("kind", "coverage")
    model = {"coverage": CoverageExperimentSpec, "performance": PerformanceExperimentSpec}.get(kind)
    if model is None:
        raise ParameterError(f"unknown experiment kind {kind!r}")
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise ParameterError(f"invalid experiment spec {path}: {exc}") from exc


def run_experiment(
    spec: CoverageExperimentSpec | PerformanceExperimentSpec,
    runner: ExperimentRunner | None = None,
) -> ExperimentReport:
    """Dispatch on the spec type."""
    if isinstance(spec, PerformanceExperimentSpec):
        return performance_experiment(spec, runner)
    return coverage_experiment(spec, runner)


def report_frame(report: ExperimentReport) -> pd.DataFrame:
    """One row per cell, columns in table order."""
    columns = [
        "method",
        "noise",
        "degree",
        "n",
        "replications",
        "no_genuine",
        "prop_genuine",
        "mean_length",
        "coverage",
        "mean_intervals",
        "empty_runs",
    ]
    frame = pd.DataFrame([row.model_dump(mode="json") for row in report.rows], columns=columns)
    if report.kind == "coverage":
        frame = frame.drop(columns=["no_genuine", "prop_genuine", "mean_length"])
    return frame


def write_report(report: ExperimentReport, path: Path) -> None:
    """Write a report as CSV or JSON depending on the file suffix."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        report_frame(report).to_csv(path, index=False)
    else:
        path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    logger.info("report written to %s", path)
