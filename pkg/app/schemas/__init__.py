"""Schemas package."""

from .cli import CliConfig
from .detection import (
    BenchRow,
    DetectionConfig,
    DetectionParams,
    DetectionResponse,
    DetectRequest,
    IntervalResponse,
    SplitFitResponse,
)
from .experiment import (
    CoverageExperimentSpec,
    ExperimentReport,
    NoiseSpec,
    PerformanceExperimentSpec,
    ReportRow,
    SignalSpec,
)
from .threshold import ThresholdDiagnostics, ThresholdParams

__all__ = [
    "CliConfig",
    "DetectionConfig",
    "DetectRequest",
    "DetectionParams",
    "DetectionResponse",
    "IntervalResponse",
    "SplitFitResponse",
    "BenchRow",
    "SignalSpec",
    "NoiseSpec",
    "CoverageExperimentSpec",
    "PerformanceExperimentSpec",
    "ReportRow",
    "ExperimentReport",
    "ThresholdParams",
    "ThresholdDiagnostics",
]
