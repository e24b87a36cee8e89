"""Command-line front end."""

import io
import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from pydantic import TypeAdapter

from app.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from app.schemas.detection import BenchRow


def _run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def noise_csv(tmp_path: Path) -> Path:
    """Pure Gaussian noise, one value per line."""
    path = tmp_path / "noise.csv"
    values = np.random.default_rng(7).normal(size=750)
    path.write_text("\n".join(f"{v:.10f}" for v in values) + "\n")
    return path


@pytest.fixture
def step_csv(tmp_path: Path) -> Path:
    """A single large step at t = 201 with a header row."""
    path = tmp_path / "step.csv"
    values = np.where(np.arange(1, 401) <= 200, 0.0, 10.0)
    values += np.random.default_rng(8).normal(size=400)
    path.write_text("y\n" + "\n".join(f"{v:.10f}" for v in values) + "\n")
    return path


class TestDetectCommand:
    def test_json_output(self, noise_csv: Path) -> None:
        code, out = _run("detect", "--input", str(noise_csv))
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["n"] == 750
        assert isinstance(data["intervals"], list)
        assert data["n_intervals"] == len(data["intervals"])
        assert data["lambda"] > 0
        assert data["params"]["min_scale"] == 6

    def test_finds_step(self, step_csv: Path) -> None:
        code, out = _run("detect", "-i", str(step_csv), "--column", "y")
        assert code == EXIT_OK
        intervals = json.loads(out)["intervals"]
        assert any(iv["start"] <= 201 <= iv["end"] for iv in intervals)
        assert any(abs(iv["eta_hat"] - 200) <= 3 for iv in intervals)

    def test_json_round_trip(self, step_csv: Path) -> None:
        _, first = _run("detect", "-i", str(step_csv))
        _, second = _run("detect", "-i", str(step_csv))
        pairs = [(iv["start"], iv["end"]) for iv in json.loads(first)["intervals"]]
        assert pairs == [(iv["start"], iv["end"]) for iv in json.loads(second)["intervals"]]

    def test_csv_output(self, step_csv: Path) -> None:
        code, out = _run("detect", "-i", str(step_csv), "--format", "csv")
        assert code == EXIT_OK
        frame = pd.read_csv(io.StringIO(out))
        assert list(frame.columns) == [
            "start",
            "end",
            "width",
            "stat",
            "eta_hat",
            "midpoint_fallback",
        ]
        assert len(frame) >= 1

    def test_human_output(self, step_csv: Path) -> None:
        code, out = _run("detect", "-i", str(step_csv), "--format", "human")
        assert code == EXIT_OK
        assert "significant interval(s)" in out

    def test_dependent_mode(self, noise_csv: Path) -> None:
        code, out = _run("detect", "-i", str(noise_csv), "--mode", "dep", "--degree", "1")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["mode"] == "dependent"
        assert data["params"]["estimator"] == "lrv"
        assert data["lrv_block"] == 9

    def test_method_preset(self, noise_csv: Path) -> None:
        code, out = _run("detect", "-i", str(noise_csv), "--method", "DIF2-SD")
        assert code == EXIT_OK
        assert json.loads(out)["params"]["estimator"] == "dif"

    def test_plot_data(self, step_csv: Path, tmp_path: Path) -> None:
        plot = tmp_path / "plot.csv"
        code, _ = _run("detect", "-i", str(step_csv), "--plot-data", str(plot))
        assert code == EXIT_OK
        frame = pd.read_csv(plot)
        assert list(frame.columns) == ["t", "y", "interval_id", "eta_flag"]
        assert len(frame) == 400
        assert frame["interval_id"].max() >= 1
        assert frame["eta_flag"].sum() == frame["interval_id"].max()

    def test_bad_cell_is_a_runtime_error(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.csv"
        path.write_text("1\n2\nNA\n")
        code, out = _run("detect", "-i", str(path))
        assert code == EXIT_RUNTIME
        error = json.loads(out)
        assert error["error"] == "ingest_error"
        assert "line 3" in error["detail"]

    def test_conflicting_options(self, noise_csv: Path) -> None:
        code, out = _run(
            "detect", "-i", str(noise_csv), "--method", "DIF1-MAD", "--mode", "dep"
        )
        assert code == EXIT_USAGE
        assert json.loads(out)["error"] == "validation_error"

    def test_unsupported_degree(self, noise_csv: Path) -> None:
        code, out = _run("detect", "-i", str(noise_csv), "--degree", "11")
        assert code == EXIT_USAGE

    def test_series_too_short_for_grid(self, tmp_path: Path) -> None:
        path = tmp_path / "short.csv"
        path.write_text("1\n2\n3\n")
        code, out = _run("detect", "-i", str(path), "--min-scale", "4")
        assert code == EXIT_USAGE
        assert json.loads(out)["error"] == "empty_scale_set"

    def test_unknown_flag(self) -> None:
        code, out = _run("detect", "--bogus")
        assert code == EXIT_USAGE
        assert json.loads(out)["error"] == "usage_error"

    def test_missing_subcommand(self) -> None:
        code, out = _run()
        assert code == EXIT_USAGE


class TestOtherCommands:
    def test_thresholds(self) -> None:
        code, out = _run("thresholds", "--n", "750", "--decay", "2")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["c_p"] == pytest.approx(3.0)
        assert data["h2_upper"] == pytest.approx(6.0)
        assert data["params"]["min_scale"] == 6

    def test_thresholds_dependent(self) -> None:
        code, out = _run("thresholds", "--n", "750", "--mode", "dep")
        assert code == EXIT_OK
        assert json.loads(out)["params"]["min_scale"] == 13

    def test_thresholds_small_sample(self) -> None:
        code, out = _run("thresholds", "--n", "40")
        assert code == EXIT_USAGE
        assert json.loads(out)["error"] == "small_sample"

    def test_simulate_quick(self, tmp_path: Path) -> None:
        report = tmp_path / "report.csv"
        code, out = _run(
            "simulate",
            "--n", "200",
            "--reps", "3",
            "--method", "DIF1-MAD",
            "--degree", "0",
            "--workers", "1",
            "--output", str(report),
        )
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["kind"] == "coverage"
        assert len(data["rows"]) == 1
        assert pd.read_csv(report)["replications"].tolist() == [3]

    def test_simulate_spec_file(self, tmp_path: Path) -> None:
        spec = tmp_path / "spec.yaml"
        spec.write_text(
            "kind: performance\nsignal:\n  kind: waves\nsigma: 5.0\nreplications: 2\n"
            "methods: [DIF1-MAD]\nworkers: 1\n"
        )
        code, out = _run("simulate", "--spec", str(spec), "--format", "csv")
        assert code == EXIT_OK
        frame = pd.read_csv(io.StringIO(out))
        assert "no_genuine" in frame.columns
        assert frame["degree"].tolist() == [1]

    def test_simulate_bad_spec(self, tmp_path: Path) -> None:
        spec = tmp_path / "spec.yaml"
        spec.write_text("kind: coverage\nn: 2\n")
        code, _ = _run("simulate", "--spec", str(spec))
        assert code == EXIT_USAGE

    def test_bench(self) -> None:
        code, out = _run("bench", "--sizes", "512", "1024")
        assert code == EXIT_OK
        assert len(TypeAdapter(list[BenchRow]).validate_json(out)) == 2
        rows = json.loads(out)
        assert [row["n"] for row in rows] == [512, 1024]
        for row in rows:
            assert row["evaluations"] == row["grid_size"]
        assert rows[0]["ratio"] is None
        assert rows[1]["ratio"] > 0
