"""Detection schemas for configuration, requests and responses."""

import math
from typing import Any

from pydantic import BaseModel, Field, model_validator

from app.core.config import settings
from app.models.enums import Calibration, Estimator, Method, NoiseMode, Selection
from app.schemas.threshold import ThresholdParams

# Noise mode and estimator behind each named method.
METHOD_PRESETS: dict[Method, tuple[NoiseMode, Estimator]] = {
    Method.DIF1_MAD: (NoiseMode.GAUSSIAN, Estimator.MAD),
    Method.DIF2_SD: (NoiseMode.DEPENDENT, Estimator.DIF),
    Method.DIF2_LRV: (NoiseMode.DEPENDENT, Estimator.LRV),
}

DEFAULT_ESTIMATOR: dict[NoiseMode, Estimator] = {
    NoiseMode.GAUSSIAN: Estimator.MAD,
    NoiseMode.DEPENDENT: Estimator.LRV,
}


def default_min_scale(n: int, mode: NoiseMode) -> int:
    """floor(ln n) in the Gaussian regime, floor(sqrt(n) / 2) otherwise; never below 2."""
    if n < 2:
        return 2
    if mode is NoiseMode.GAUSSIAN:
        w = math.floor(math.log(n))
    else:
        w = math.floor(0.5 * math.sqrt(n) + 1e-9)
    return max(2, w)


# ============== Configuration ==============
class DetectionConfig(BaseModel):
    """Configuration of one detect call.

    ``method`` fills ``mode`` and ``estimator`` from a named preset. Unset ``min_scale``
    resolves per series length and mode.
    """

    degree: int = Field(default=0, ge=0, le=settings.MAX_DEGREE)
    alpha: float = Field(default=settings.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    decay: float = Field(default=settings.DEFAULT_DECAY, gt=1.0)
    min_scale: int | None = Field(default=None, ge=2)
    mode: NoiseMode = NoiseMode.GAUSSIAN
    estimator: Estimator | None = None
    method: Method | None = None
    lrv_block: int | None = Field(default=None, ge=1)
    sigma: float | None = Field(default=None, gt=0.0, description="Known noise scale")
    calibration: Calibration = Calibration.FWE
    epsilon: float = Field(default=0.1, ge=0.0)
    threshold: float | None = Field(default=None, gt=0.0, description="Override sigma * lambda")
    segment: tuple[int, int] | None = None
    selection: Selection = Selection.FIRST
    localize: bool = True

    model_config = {"frozen": True}

    @model_validator(mode="before")
    @classmethod
    def apply_method(cls, data: Any) -> Any:
        """Fill mode and estimator from the method preset, or the estimator from the mode."""
        if not isinstance(data, dict):
            return data
        data = dict(data)
        if data.get("method") is not None:
            method = Method(data["method"])
            mode, estimator = METHOD_PRESETS[method]
            if data.get("mode") is not None and NoiseMode(data["mode"]) is not mode:
                raise ValueError(f"method {method.value} implies mode {mode.value}")
            if data.get("estimator") is not None and Estimator(data["estimator"]) is not estimator:
                raise ValueError(f"method {method.value} implies estimator {estimator.value}")
            data["mode"], data["estimator"] = mode, estimator
        elif data.get("estimator") is None:
            data["estimator"] = DEFAULT_ESTIMATOR[NoiseMode(data.get("mode") or NoiseMode.GAUSSIAN)]
        return data

    @model_validator(mode="after")
    def check_consistency(self) -> "DetectionConfig":
        """Cross-field checks."""
        if self.estimator is Estimator.LRV and self.mode is not NoiseMode.DEPENDENT:
            raise ValueError("estimator lrv requires mode dependent")
        if self.segment is not None:
            s, e = self.segment
            if not 1 <= s <= e:
                raise ValueError(f"segment must satisfy 1 <= s <= e, got {self.segment}")
        return self

    def resolve_min_scale(self, n: int) -> int:
        """Minimum grid scale W for a series of length n."""
        return self.min_scale if self.min_scale is not None else default_min_scale(n, self.mode)

    def threshold_params(self, n: int) -> ThresholdParams:
        """Threshold inputs for a series of length n."""
        return ThresholdParams(
            n=n,
            min_scale=self.resolve_min_scale(n),
            decay=self.decay,
            degree=self.degree,
            alpha=self.alpha,
            mode=self.mode,
        )


class DetectRequest(BaseModel):
    """Schema for a detect request with inline values."""

    values: list[float] = Field(min_length=1)
    config: DetectionConfig = Field(default_factory=DetectionConfig)


# ============== Responses ==============
class SplitFitResponse(BaseModel):
    """Schema for the two-piece fit behind eta_hat."""

    eta: int
    rss: float
    left_coeffs: list[float]
    right_coeffs: list[float]

    model_config = {"from_attributes": True}


class IntervalResponse(BaseModel):
    """Schema for one significant interval."""

    start: int
    end: int
    width: int
    stat: float
    eta_hat: int | None = None
    midpoint_fallback: bool = False
    fit: SplitFitResponse | None = None

    model_config = {"from_attributes": True}


class DetectionParams(BaseModel):
    """Resolved parameters echoed with a result."""

    degree: int
    alpha: float
    decay: float
    min_scale: int
    estimator: Estimator
    method: Method | None = None
    calibration: Calibration
    selection: Selection
    segment: tuple[int, int] | None = None


class DetectionResponse(BaseModel):
    """Schema for a detection result."""

    n: int
    intervals: list[IntervalResponse]
    n_intervals: int
    lambda_value: float | None = Field(alias="lambda")
    threshold: float | None
    sigma_hat: float
    lrv_block: int | None = None
    mode: NoiseMode
    params: DetectionParams
    evaluations: int
    elapsed: float

    model_config = {"populate_by_name": True}


class BenchRow(BaseModel):
    """Schema for one size of the scaling benchmark."""

    n: int
    grid_size: int
    evaluations: int
    elapsed: float
    max_statistic: float
    ratio: float | None = Field(default=None, description="Wall time over the previous size")
