"""Long Monte Carlo checks of coverage, performance, error control and scaling.

These take minutes each; run them with ``pytest -m slow``.
"""

import math

import numpy as np
import pytest

from app.models import Method, NoiseKind, NoiseMode, SignalKind, TimeSeries
from app.schemas.detection import DetectionConfig
from app.schemas.experiment import (
    CoverageExperimentSpec,
    PerformanceExperimentSpec,
    SignalSpec,
)
from app.schemas.threshold import ThresholdParams
from app.services.detection_service import bench
from app.services.experiment_service import coverage_experiment, performance_experiment
from app.services.grid import build_grid
from app.services.kernel import binomials, build_prefix_sums
from app.services.search import detect, grid_max_statistic
from app.services.thresholds import compute_threshold

pytestmark = pytest.mark.slow

SQRT2 = math.sqrt(2.0)


def _rows(report) -> dict[tuple[Method, NoiseKind, int], float]:
    return {(r.method, r.noise, r.degree): r.coverage for r in report.rows}


def test_null_coverage_gaussian() -> None:
    report = coverage_experiment(CoverageExperimentSpec(n=750, replications=500, seed=1))
    coverage = _rows(report)
    for p, expected in zip((0, 1, 2), (0.91, 0.91, 0.93), strict=True):
        assert coverage[(Method.DIF1_MAD, NoiseKind.N1, p)] == pytest.approx(expected, abs=0.05)
    for p, expected in zip((0, 1, 2), (0.99, 0.95, 0.97), strict=True):
        assert coverage[(Method.DIF2_LRV, NoiseKind.N1, p)] == pytest.approx(expected, abs=0.05)
    for p in (0, 1, 2):
        assert coverage[(Method.DIF2_SD, NoiseKind.N1, p)] >= 0.96


def test_null_coverage_dependent() -> None:
    spec = CoverageExperimentSpec(n=750, replications=500, noise=[NoiseKind.N3], seed=2)
    coverage = _rows(coverage_experiment(spec))
    for p in (0, 1, 2):
        assert coverage[(Method.DIF2_LRV, NoiseKind.N3, p)] == pytest.approx(0.98, abs=0.05)
        assert coverage[(Method.DIF1_MAD, NoiseKind.N3, p)] <= 0.10
        assert coverage[(Method.DIF2_SD, NoiseKind.N3, p)] <= 0.10


@pytest.mark.parametrize("n,expected", [(100, 0.98), (500, 0.97), (1000, 0.97), (2000, 0.97)])
def test_lrv_length_sweep(n: int, expected: float) -> None:
    spec = CoverageExperimentSpec(
        n=n, replications=500, methods=[Method.DIF2_LRV], degrees=[0], seed=3
    )
    assert coverage_experiment(spec).rows[0].coverage == pytest.approx(expected, abs=0.05)


def test_lrv_heavy_tailed_dependent_noise() -> None:
    spec = CoverageExperimentSpec(
        n=2000,
        replications=500,
        methods=[Method.DIF2_LRV],
        noise=[NoiseKind.N4],
        degrees=[0],
        seed=4,
    )
    assert coverage_experiment(spec).rows[0].coverage == pytest.approx(0.97, abs=0.05)


def test_blocks_performance() -> None:
    spec = PerformanceExperimentSpec(
        signal=SignalSpec(kind=SignalKind.BLOCKS),
        sigma=10.0,
        replications=500,
        methods=[Method.DIF1_MAD, Method.DIF2_LRV],
        seed=5,
    )
    rows = {row.method: row for row in performance_experiment(spec).rows}
    mad = rows[Method.DIF1_MAD]
    assert mad.no_genuine == pytest.approx(3.68, abs=0.3)
    assert mad.coverage == pytest.approx(0.93, abs=0.05)
    assert mad.mean_length == pytest.approx(34.78, rel=0.2)
    assert rows[Method.DIF2_LRV].coverage >= 0.97


@pytest.mark.parametrize(
    "kind,sigma,method,noise,floor",
    [
        (SignalKind.WAVES, 5.0, Method.DIF1_MAD, NoiseKind.N1, 0.88),
        (SignalKind.WAVES, 5.0, Method.DIF2_LRV, NoiseKind.N3, 0.93),
        (SignalKind.HILLS, 1.0, Method.DIF1_MAD, NoiseKind.N1, 0.88),
        (SignalKind.HILLS, 1.0, Method.DIF2_LRV, NoiseKind.N3, 0.93),
    ],
)
def test_smooth_signal_coverage(
    kind: SignalKind, sigma: float, method: Method, noise: NoiseKind, floor: float
) -> None:
    spec = PerformanceExperimentSpec(
        signal=SignalSpec(kind=kind),
        sigma=sigma,
        replications=500,
        methods=[method],
        noise=[noise],
        seed=6,
    )
    row = performance_experiment(spec).rows[0]
    assert row.coverage >= floor


@pytest.mark.parametrize("n", [750, 4000])
def test_family_wise_error(n: int) -> None:
    rng = np.random.default_rng(n)
    for p in (0, 1, 2):
        params = ThresholdParams(n=n, min_scale=math.floor(math.log(n)), decay=SQRT2, degree=p)
        lam = compute_threshold(params).lambda_alpha
        weights = binomials(p)
        grid = build_grid(n, params.min_scale, SQRT2, min_width=weights.n_chunks)
        exceed = sum(
            grid_max_statistic(build_prefix_sums(TimeSeries(rng.normal(size=n))), grid, weights)
            > lam
            for _ in range(2000)
        )
        assert exceed / 2000 <= 0.14


def test_coarser_grid_pays_less() -> None:
    n, reps = 750, 2000
    w = math.floor(math.log(n))
    rates = []
    for decay in (SQRT2, 2.0):
        rng = np.random.default_rng(11)
        lam = compute_threshold(ThresholdParams(n=n, min_scale=w, decay=decay)).lambda_alpha
        grid = build_grid(n, w, decay)
        weights = binomials(0)
        rates.append(
            sum(
                grid_max_statistic(build_prefix_sums(TimeSeries(rng.normal(size=n))), grid, weights)
                > lam
                for _ in range(reps)
            )
        )
    assert rates[1] <= rates[0]


def test_scaling() -> None:
    first, second = bench([1 << 16, 1 << 18])
    assert first.evaluations <= first.grid_size
    assert second.evaluations <= second.grid_size
    assert second.ratio <= 4.8


def test_large_detect() -> None:
    y = np.random.default_rng(13).normal(size=10**6)
    cfg = DetectionConfig(degree=1, mode=NoiseMode.GAUSSIAN)
    assert detect(TimeSeries(y), cfg).elapsed < 10.0
