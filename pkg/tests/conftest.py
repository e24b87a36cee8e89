"""Shared fixtures."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture
def client() -> TestClient:
    """Create test client."""
    return TestClient(app)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so statistical tests are reproducible."""
    return np.random.default_rng(20240611)
