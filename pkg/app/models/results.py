"""Result types produced by the estimators, the thresholds and the search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from app.models.enums import Estimator, NoiseMode

if TYPE_CHECKING:
    from app.schemas.detection import DetectionConfig


@dataclass(frozen=True)
class ScaleEstimate:
    """Noise scale on the standard-deviation scale (sigma-hat or tau-hat)."""

    value: float
    method: Estimator | str
    block_size: int | None = None


@dataclass(frozen=True)
class ThresholdValue:
    """Noise-scale-free threshold lambda_alpha together with the constant it used.

    ``h_used`` is None for the consistent calibration, which has no extreme-value constant.
    """

    lambda_alpha: float
    h_used: float | None
    mode: NoiseMode | str


@dataclass(frozen=True)
class SplitFit:
    """Best two-piece polynomial fit inside an interval.

    The left piece is {start..eta}, the right piece {eta+1..end}; coefficients are in
    powers of t/n.
    """

    eta: int
    rss: float
    left_coeffs: tuple[float, ...]
    right_coeffs: tuple[float, ...]


@dataclass(frozen=True)
class SignificantInterval:
    """A grid window on which the local test rejected."""

    start: int
    end: int
    width: int
    stat: float
    eta_hat: int | None = None
    fit: SplitFit | None = None
    midpoint_fallback: bool = False

    def contains(self, index: int) -> bool:
        """Whether ``index`` lies in {start..end}."""
        return self.start <= index <= self.end

    def overlaps(self, other: SignificantInterval) -> bool:
        """Whether the two index sets intersect."""
        return self.start <= other.end and other.start <= self.end


@dataclass(frozen=True)
class DetectionResult:
    """Output of one detect call."""

    n: int
    intervals: tuple[SignificantInterval, ...]
    threshold: float
    lambda_value: ThresholdValue
    scale: ScaleEstimate
    config: DetectionConfig
    min_scale: int
    evaluations: int
    elapsed: float = field(default=0.0, compare=False)

    @property
    def n_intervals(self) -> int:
        """Number of intervals; a high-probability lower bound on the number of change points."""
        return len(self.intervals)
