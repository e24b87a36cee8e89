"""Monte Carlo harness: seeding, aggregation and report output."""

import json
import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from app.core.exceptions import ParameterError
from app.models import Method, NoiseKind, SignalKind
from app.schemas.detection import DetectionConfig
from app.schemas.experiment import (
    CoverageExperimentSpec,
    NoiseSpec,
    PerformanceExperimentSpec,
    SignalSpec,
)
from app.services.experiment_service import (
    ExperimentRunner,
    ReplicationOutcome,
    ReplicationTask,
    coverage_experiment,
    load_experiment_spec,
    performance_experiment,
    replication_rng,
    report_frame,
    resolve_workers,
    run_experiment,
    run_replication,
    write_report,
)

DATA_DIR = Path(__file__).resolve().parent.parent / "app" / "data" / "experiments"


@pytest.fixture
def inline() -> ExperimentRunner:
    """Runner that stays in-process."""
    return ExperimentRunner(workers=1)


class TestReplication:
    def test_rng_is_keyed(self) -> None:
        a = replication_rng(1, 2, 3).normal(size=5)
        assert np.array_equal(a, replication_rng(1, 2, 3).normal(size=5))
        assert not np.array_equal(a, replication_rng(1, 2, 4).normal(size=5))
        assert not np.array_equal(a, replication_rng(1, 3, 3).normal(size=5))

    def test_genuine_scoring(self) -> None:
        mean = np.where(np.arange(1, 301) < 150, 0.0, 40.0)
        task = ReplicationTask(
            root_seed=0,
            cell_index=0,
            replication=0,
            n=300,
            mean=mean,
            noise=NoiseSpec(sigma=0.01),
            config=DetectionConfig(sigma=0.01, localize=False),
            change_points=(150,),
        )
        outcome = run_replication(task)
        assert outcome.n_intervals >= 1
        assert outcome.n_genuine >= 1
        assert outcome.total_length > 0

    def test_intervals_missing_the_change_are_not_genuine(self) -> None:
        mean = np.where(np.arange(1, 301) < 150, 0.0, 5.0)
        task = ReplicationTask(
            root_seed=0,
            cell_index=0,
            replication=0,
            n=300,
            mean=mean,
            noise=NoiseSpec(),
            config=DetectionConfig(threshold=0.5, localize=False),
            change_points=(150,),
        )
        outcome = run_replication(task)
        assert outcome.n_intervals > 1
        # Disjoint intervals: at most one holds t = 150.
        assert outcome.n_genuine <= 1
        assert not outcome.covered

    def test_empty_run_is_covered(self) -> None:
        task = ReplicationTask(
            root_seed=0,
            cell_index=0,
            replication=0,
            n=200,
            mean=None,
            noise=NoiseSpec(),
            config=DetectionConfig(threshold=math.inf),
            change_points=(),
        )
        assert run_replication(task) == ReplicationOutcome(0, 0, 0, True)


class TestWorkers:
    def test_cap(self, monkeypatch: pytest.MonkeyPatch) -> None:
        from app.core.config import settings

        monkeypatch.setattr(settings, "CPINFER_THREADS", 2)
        assert resolve_workers(8) == 2
        assert resolve_workers(1) == 1
        assert resolve_workers(None) <= 2

    def test_pool_matches_inline(self) -> None:
        spec = CoverageExperimentSpec(
            n=200, replications=6, methods=[Method.DIF1_MAD], degrees=[0], seed=3
        )
        inline = coverage_experiment(spec, ExperimentRunner(workers=1))
        pooled = coverage_experiment(spec, ExperimentRunner(workers=2))
        assert inline == pooled


class TestCoverage:
    def test_infinite_threshold(self, inline: ExperimentRunner) -> None:
        spec = CoverageExperimentSpec(
            n=200,
            replications=5,
            noise=[NoiseKind.N1, NoiseKind.N3],
            degrees=[0, 1],
            threshold=math.inf,
        )
        report = coverage_experiment(spec, inline)
        assert len(report.rows) == 3 * 2 * 2
        assert all(row.coverage == 1.0 for row in report.rows)
        assert all(row.empty_runs == 5 for row in report.rows)
        # method x noise x degree order
        assert [(r.method, r.noise, r.degree) for r in report.rows[:3]] == [
            (Method.DIF1_MAD, NoiseKind.N1, 0),
            (Method.DIF1_MAD, NoiseKind.N1, 1),
            (Method.DIF1_MAD, NoiseKind.N3, 0),
        ]

    def test_reproducible(self, inline: ExperimentRunner) -> None:
        spec = CoverageExperimentSpec(n=300, replications=8, degrees=[0], seed=9)
        assert coverage_experiment(spec, inline) == coverage_experiment(spec, inline)

    def test_coverage_is_share_of_empty_runs(self, inline: ExperimentRunner) -> None:
        spec = CoverageExperimentSpec(
            n=300, replications=10, methods=[Method.DIF1_MAD], degrees=[0], seed=4
        )
        row = coverage_experiment(spec, inline).rows[0]
        assert row.coverage == row.empty_runs / row.replications
        assert row.no_genuine is None


class TestPerformance:
    def test_noise_free_like_blocks(self, inline: ExperimentRunner) -> None:
        spec = PerformanceExperimentSpec(
            signal=SignalSpec(kind=SignalKind.BLOCKS, amplitude=700.0),
            sigma=0.5,
            alpha=1e-6,
            replications=3,
            methods=[Method.DIF1_MAD],
        )
        report = performance_experiment(spec, inline)
        row = report.rows[0]
        assert report.change_points == [205, 267, 308, 472]
        assert row.no_genuine == 4
        assert row.prop_genuine == 1.0
        assert row.coverage == 1.0
        assert row.mean_length is not None
        assert row.degree == 0

    def test_degree_override(self, inline: ExperimentRunner) -> None:
        spec = PerformanceExperimentSpec(
            signal=SignalSpec(kind=SignalKind.HILLS),
            sigma=1.0,
            replications=1,
            methods=[Method.DIF1_MAD],
            degree=3,
        )
        assert performance_experiment(spec, inline).rows[0].degree == 3

    def test_needs_a_signal(self) -> None:
        with pytest.raises(ValueError):
            PerformanceExperimentSpec(signal=SignalSpec(kind=SignalKind.NONE, n=100))

    def test_dispatch(self, inline: ExperimentRunner) -> None:
        spec = PerformanceExperimentSpec(replications=1, methods=[Method.DIF2_SD])
        assert run_experiment(spec, inline).kind == "performance"


class TestReports:
    def _report(self, inline: ExperimentRunner):
        spec = CoverageExperimentSpec(
            n=200, replications=2, methods=[Method.DIF2_SD], degrees=[0, 1]
        )
        return coverage_experiment(spec, inline)

    def test_frame(self, inline: ExperimentRunner) -> None:
        frame = report_frame(self._report(inline))
        assert list(frame.columns) == [
            "method",
            "noise",
            "degree",
            "n",
            "replications",
            "coverage",
            "mean_intervals",
            "empty_runs",
        ]
        assert len(frame) == 2

    def test_write_csv(self, inline: ExperimentRunner, tmp_path: Path) -> None:
        path = tmp_path / "report.csv"
        write_report(self._report(inline), path)
        frame = pd.read_csv(path)
        assert frame["method"].tolist() == ["DIF2-SD", "DIF2-SD"]

    def test_write_json(self, inline: ExperimentRunner, tmp_path: Path) -> None:
        path = tmp_path / "report.json"
        report = self._report(inline)
        write_report(report, path)
        data = json.loads(path.read_text())
        assert data["kind"] == "coverage"
        assert len(data["rows"]) == 2


class TestSpecFiles:
    @pytest.mark.parametrize(
        "name,model",
        [
            ("coverage_n1.yaml", CoverageExperimentSpec),
            ("coverage_n3.yaml", CoverageExperimentSpec),
            ("blocks_performance.yaml", PerformanceExperimentSpec),
        ],
    )
    def test_shipped_specs_load(self, name: str, model: type) -> None:
        assert isinstance(load_experiment_spec(DATA_DIR / name), model)

    def test_invalid_spec(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.yaml"
        path.write_text("kind: coverage\nreplications: 0\n")
        with pytest.raises(ParameterError):
            load_experiment_spec(path)

    def test_unknown_kind(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.yaml"
        path.write_text("kind: sweep\n")
        with pytest.raises(ParameterError):
            load_experiment_spec(path)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ParameterError):
            load_experiment_spec(tmp_path / "nope.yaml")
