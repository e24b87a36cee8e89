"""Detection façade shared by the HTTP routes and the CLI."""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import IO

import numpy as np
import pandas as pd

from app.models import DetectionResult, NoiseMode, TimeSeries
from app.schemas.detection import (
    BenchRow,
    DetectionConfig,
    DetectionParams,
    DetectionResponse,
    IntervalResponse,
)
from app.services.grid import build_grid
from app.services.ingest import ingest_csv
from app.services.kernel import binomials, build_prefix_sums
from app.services.search import detect, grid_max_statistic

logger = logging.getLogger(__name__)

BENCH_SIZES = (1 << 16, 1 << 18)


def detect_values(values: Sequence[float], cfg: DetectionConfig) -> DetectionResult:
    """Run detection on in-memory values."""
    return detect(TimeSeries(np.asarray(values, dtype=np.float64)), cfg)


def detect_csv(
    source: str | Path | IO, cfg: DetectionConfig, column: str | int | None = None
) -> tuple[TimeSeries, DetectionResult]:
    """Ingest a CSV column and run detection on it."""
    ts = ingest_csv(source, column)
    return ts, detect(ts, cfg)


def build_detection_response(result: DetectionResult) -> DetectionResponse:
    """Build the wire form of a detection result."""
    cfg = result.config
    return DetectionResponse(
        n=result.n,
        intervals=[IntervalResponse.model_validate(iv) for iv in result.intervals],
        n_intervals=result.n_intervals,
        lambda_value=(
            result.lambda_value.lambda_alpha
            if math.isfinite(result.lambda_value.lambda_alpha)
            else None
        ),
        threshold=result.threshold if math.isfinite(result.threshold) else None,
        sigma_hat=result.scale.value,
        lrv_block=result.scale.block_size,
        mode=cfg.mode,
        params=DetectionParams(
            degree=cfg.degree,
            alpha=cfg.alpha,
            decay=cfg.decay,
            min_scale=result.min_scale,
            estimator=cfg.estimator,
            method=cfg.method,
            calibration=cfg.calibration,
            selection=cfg.selection,
            segment=cfg.segment,
        ),
        evaluations=result.evaluations,
        elapsed=result.elapsed,
    )


def plot_data_frame(ts: TimeSeries, result: DetectionResult) -> pd.DataFrame:
    """Columns t, y, interval_id (1-based, 0 outside every interval) and eta_flag."""
    interval_id = np.zeros(ts.n, dtype=np.int64)
    eta_flag = np.zeros(ts.n, dtype=np.int64)
    for k, interval in enumerate(result.intervals, start=1):
        interval_id[interval.start - 1 : interval.end] = k
        if interval.eta_hat is not None:
            eta_flag[interval.eta_hat - 1] = 1
    return pd.DataFrame(
        {
            "t": np.arange(1, ts.n + 1),
            "y": ts.values,
            "interval_id": interval_id,
            "eta_flag": eta_flag,
        }
    )


def bench(
    sizes: Iterable[int] = BENCH_SIZES, degree: int = 0, decay: float | None = None, seed: int = 0
) -> list[BenchRow]:
    """Time a full-grid scan on Gaussian noise for each size.

    The threshold is +inf, so every grid window is evaluated exactly once.
    """
    rows: list[BenchRow] = []
    previous: float | None = None
    rng = np.random.default_rng(seed)
    extra = {} if decay is None else {"decay": decay}
    for n in sizes:
        cfg = DetectionConfig(
            degree=degree,
            mode=NoiseMode.GAUSSIAN,
            sigma=1.0,
            threshold=math.inf,
            localize=False,
            **extra,
        )
        ts = TimeSeries(rng.standard_normal(n))
        started = time.perf_counter()
        result = detect(ts, cfg)
        elapsed = time.perf_counter() - started

        weights = binomials(degree)
        grid = build_grid(n, result.min_scale, cfg.decay, min_width=weights.n_chunks)
        max_stat = grid_max_statistic(build_prefix_sums(ts), grid, weights)
        rows.append(
            BenchRow(
                n=n,
                grid_size=grid.size,
                evaluations=result.evaluations,
                elapsed=elapsed,
                max_statistic=max_stat,
                ratio=elapsed / previous if previous else None,
            )
        )
        logger.info("bench n=%d: %d evaluations in %.3fs", n, result.evaluations, elapsed)
        previous = elapsed
    return rows
