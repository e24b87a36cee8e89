"""Domain models package."""

from app.models.enums import (
    ArInnovation,
    Bound,
    Calibration,
    Estimator,
    Method,
    NoiseKind,
    NoiseMode,
    OutputFormat,
    Selection,
    SignalKind,
)
from app.models.grid import Candidate, GridSpec
from app.models.results import (
    DetectionResult,
    ScaleEstimate,
    SignificantInterval,
    SplitFit,
    ThresholdValue,
)
from app.models.series import DiffWeights, PrefixSums, TimeSeries

__all__ = [
    # Enums
    "ArInnovation",
    "Bound",
    "Calibration",
    "Estimator",
    "Method",
    "NoiseKind",
    "NoiseMode",
    "OutputFormat",
    "Selection",
    "SignalKind",
    # Series
    "TimeSeries",
    "PrefixSums",
    "DiffWeights",
    # Grid
    "Candidate",
    "GridSpec",
    # Results
    "DetectionResult",
    "ScaleEstimate",
    "SignificantInterval",
    "SplitFit",
    "ThresholdValue",
]
