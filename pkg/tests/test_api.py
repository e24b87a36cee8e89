"""HTTP API tests."""

import numpy as np
from fastapi.testclient import TestClient

from app.core.config import settings


def _step_values(n: int = 300, at: int = 150, height: float = 10.0) -> list[float]:
    values = np.where(np.arange(1, n + 1) < at, 0.0, height)
    return (values + np.random.default_rng(12).normal(size=n)).tolist()


class TestDetect:
    def test_inline_values(self, client: TestClient) -> None:
        response = client.post("/api/detect", json={"values": _step_values()})
        assert response.status_code == 200
        data = response.json()
        assert data["n"] == 300
        assert data["mode"] == "gaussian"
        assert "lambda" in data
        assert any(iv["start"] <= 150 <= iv["end"] for iv in data["intervals"])

    def test_config(self, client: TestClient) -> None:
        response = client.post(
            "/api/detect",
            json={"values": _step_values(), "config": {"method": "DIF2-LRV", "degree": 1}},
        )
        assert response.status_code == 200
        data = response.json()
        assert data["mode"] == "dependent"
        assert data["params"]["estimator"] == "lrv"
        assert data["params"]["degree"] == 1

    def test_invalid_config(self, client: TestClient) -> None:
        response = client.post(
            "/api/detect", json={"values": [1.0, 2.0], "config": {"estimator": "lrv"}}
        )
        assert response.status_code == 422

    def test_domain_error(self, client: TestClient) -> None:
        response = client.post("/api/detect", json={"values": [1.0, 2.0, 3.0]})
        assert response.status_code == 422
        assert response.json()["error"] == "empty_scale_set"

    def test_degenerate_scale(self, client: TestClient) -> None:
        response = client.post("/api/detect", json={"values": [2.0] * 100})
        assert response.status_code == 422
        assert response.json()["error"] == "degenerate_scale"

    def test_upload(self, client: TestClient) -> None:
        body = "y\n" + "\n".join(str(v) for v in _step_values()) + "\n"
        response = client.post(
            "/api/detect/upload",
            files={"file": ("series.csv", body, "text/csv")},
            params={"column": "y", "selection": "argmax"},
        )
        assert response.status_code == 200
        data = response.json()
        assert data["params"]["selection"] == "argmax"
        assert data["n_intervals"] >= 1

    def test_upload_bad_cell(self, client: TestClient) -> None:
        response = client.post(
            "/api/detect/upload", files={"file": ("series.csv", "1\nx\n", "text/csv")}
        )
        assert response.status_code == 422
        assert response.json()["error"] == "ingest_error"

    def test_upload_conflicting_options(self, client: TestClient) -> None:
        response = client.post(
            "/api/detect/upload",
            files={"file": ("series.csv", "1\n2\n", "text/csv")},
            params={"method": "DIF1-MAD", "mode": "dependent"},
        )
        assert response.status_code == 422


class TestThresholds:
    def test_gaussian(self, client: TestClient) -> None:
        response = client.get("/api/thresholds", params={"n": 750, "decay": 2.0})
        assert response.status_code == 200
        data = response.json()
        assert data["c_p"] == 3.0
        assert data["params"]["min_scale"] == 6
        assert data["h1_lower"] >= data["h1_upper"]

    def test_dependent(self, client: TestClient) -> None:
        response = client.get("/api/thresholds", params={"n": 750, "mode": "dependent"})
        assert response.status_code == 200
        assert response.json()["d"] is None

    def test_small_sample(self, client: TestClient) -> None:
        response = client.get("/api/thresholds", params={"n": 20})
        assert response.status_code == 422
        assert response.json()["error"] == "small_sample"


class TestExperiments:
    def test_coverage(self, client: TestClient) -> None:
        response = client.post(
            "/api/experiments/coverage",
            json={
                "n": 200,
                "replications": 2,
                "methods": ["DIF1-MAD"],
                "degrees": [0],
                "workers": 1,
            },
        )
        assert response.status_code == 200
        data = response.json()
        assert data["kind"] == "coverage"
        assert data["rows"][0]["replications"] == 2

    def test_performance(self, client: TestClient) -> None:
        response = client.post(
            "/api/experiments/performance",
            json={"replications": 1, "methods": ["DIF2-SD"], "workers": 1},
        )
        assert response.status_code == 200
        assert response.json()["change_points"] == [205, 267, 308, 472]

    def test_replication_cap(self, client: TestClient) -> None:
        response = client.post(
            "/api/experiments/coverage",
            json={"replications": settings.MAX_API_REPLICATIONS + 1},
        )
        assert response.status_code == 422
