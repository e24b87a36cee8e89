"""Command-line configuration schema."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field

from app.core.config import settings
from app.models.enums import (
    Calibration,
    Estimator,
    Method,
    NoiseMode,
    OutputFormat,
    Selection,
)
from app.schemas.detection import DetectionConfig

# Short spellings accepted by --mode.
MODE_ALIASES = {"gauss": NoiseMode.GAUSSIAN, "dep": NoiseMode.DEPENDENT}


class CliConfig(BaseModel):
    """Validated command line of the ``detect`` and ``thresholds`` subcommands."""

    subcommand: Literal["detect", "simulate", "thresholds", "bench", "serve"]
    input: Path | None = None
    column: str | None = None
    degree: int = Field(default=0, ge=0, le=settings.MAX_DEGREE)
    alpha: float = Field(default=settings.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    decay: float = Field(default=settings.DEFAULT_DECAY, gt=1.0)
    min_scale: int | None = Field(default=None, ge=2)
    lrv_block: int | None = Field(default=None, ge=1)
    mode: NoiseMode | None = None
    estimator: Estimator | None = None
    method: Method | None = None
    sigma: float | None = Field(default=None, gt=0.0)
    calibration: Calibration = Calibration.FWE
    selection: Selection = Selection.FIRST
    segment: tuple[int, int] | None = None
    format: OutputFormat = OutputFormat.JSON
    plot_data: Path | None = None
    seed: int = Field(default=0, ge=0)

    def detection_config(self) -> DetectionConfig:
        """DetectionConfig for the detect subcommand.

        Raises:
            pydantic.ValidationError: If the options are inconsistent
        """
        fields = {
            "degree": self.degree,
            "alpha": self.alpha,
            "decay": self.decay,
            "min_scale": self.min_scale,
            "mode": self.mode,
            "estimator": self.estimator,
            "method": self.method,
            "lrv_block": self.lrv_block,
            "sigma": self.sigma,
            "calibration": self.calibration,
            "selection": self.selection,
            "segment": self.segment,
        }
        return DetectionConfig(**{k: v for k, v in fields.items() if v is not None})
