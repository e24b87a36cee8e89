"""Threshold schemas."""

import math

from pydantic import BaseModel, Field

from app.core.config import settings
from app.models.enums import NoiseMode


class ThresholdParams(BaseModel):
    """Inputs of the family-wise-error threshold.

    Hashable so computed thresholds can be memoised.
    """

    n: int = Field(ge=1)
    min_scale: int = Field(ge=1, description="Minimum grid scale W")
    decay: float = Field(default=settings.DEFAULT_DECAY, gt=1.0, description="Decay parameter a")
    degree: int = Field(default=0, ge=0, le=settings.MAX_DEGREE)
    alpha: float = Field(default=settings.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    mode: NoiseMode = NoiseMode.GAUSSIAN

    model_config = {"frozen": True}

    @property
    def d(self) -> float:
        """Finite-sample plug-in W / ln(n) for the Gaussian regime."""
        return self.min_scale / math.log(self.n) if self.n > 1 else math.inf


class ThresholdDiagnostics(BaseModel):
    """Extreme-value constants and the resulting threshold."""

    c_p: float
    h1_lower: float
    h1_upper: float
    h2_lower: float
    h2_upper: float
    lambda_alpha: float
    d: float | None = None
    mode: NoiseMode
    params: ThresholdParams
