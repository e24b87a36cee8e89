"""Simulation experiment routes."""

from typing import Annotated

from fastapi import APIRouter, Depends

from app.api.deps import limited_coverage_spec, limited_performance_spec
from app.schemas.experiment import (
    CoverageExperimentSpec,
    ExperimentReport,
    PerformanceExperimentSpec,
)
from app.services.experiment_service import coverage_experiment, performance_experiment

router = APIRouter(prefix="/experiments", tags=["Experiments"])


@router.post("/coverage", response_model=ExperimentReport)
def run_coverage(
    spec: Annotated[CoverageExperimentSpec, Depends(limited_coverage_spec)],
) -> ExperimentReport:
    """Run a pure-noise coverage experiment."""
    return coverage_experiment(spec)


@router.post("/performance", response_model=ExperimentReport)
def run_performance(
    spec: Annotated[PerformanceExperimentSpec, Depends(limited_performance_spec)],
) -> ExperimentReport:
    """Run a performance experiment on a test signal."""
    return performance_experiment(spec)
