"""Simulation harness schemas: signal and noise recipes, experiment specs and reports."""

from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.config import settings
from app.models.enums import ArInnovation, Method, NoiseKind, SignalKind


# ============== Recipes ==============
class SignalSpec(BaseModel):
    """Noise-free mean vector recipe.

    ``blocks``, ``waves`` and ``hills`` take their defaults from the signals file; ``none``
    needs ``n``; ``custom`` needs ``n``, ``change_points`` and one coefficient list per
    segment. A change point is the first index of the new segment.
    """

    kind: SignalKind = SignalKind.NONE
    n: int | None = Field(default=None, ge=1)
    change_points: list[int] | None = None
    coefficients: list[list[float]] | None = Field(
        default=None, description="Per-segment coefficients of (t/n)^0, (t/n)^1, ..."
    )
    amplitude: float | None = Field(
        default=None,
        gt=0.0,
        description="blocks target sd, waves amplitude or hills height; file default if unset",
    )

    model_config = {"frozen": True}

    @field_validator("change_points")
    @classmethod
    def validate_change_points(cls, v: list[int] | None) -> list[int] | None:
        """Change points must be strictly increasing."""
        if v is not None and any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError("change_points must be strictly increasing")
        return v


class NoiseSpec(BaseModel):
    """Noise process recipe."""

    kind: NoiseKind = NoiseKind.N1
    sigma: float = Field(default=1.0, gt=0.0)
    phi: float = Field(default=settings.AR_PHI, gt=-1.0, lt=1.0)
    ar_innovation: ArInnovation = ArInnovation.PRINTED
    burn_in: int = Field(default=settings.AR_BURN_IN, ge=0)
    seed: int | None = None

    model_config = {"frozen": True}


# ============== Experiments ==============
class CoverageExperimentSpec(BaseModel):
    """Pure-noise runs: coverage is the share of replications returning no interval."""

    n: int = Field(default=750, ge=4)
    alpha: float = Field(default=settings.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    decay: float = Field(default=settings.DEFAULT_DECAY, gt=1.0)
    replications: int = Field(default=500, ge=1)
    methods: list[Method] = Field(default_factory=lambda: list(Method), min_length=1)
    noise: list[NoiseKind] = Field(default_factory=lambda: [NoiseKind.N1], min_length=1)
    degrees: list[int] = Field(default_factory=lambda: [0, 1, 2], min_length=1)
    sigma: float = Field(default=1.0, gt=0.0)
    phi: float = Field(default=settings.AR_PHI, gt=-1.0, lt=1.0)
    ar_innovation: ArInnovation = ArInnovation.PRINTED
    threshold: float | None = Field(default=None, gt=0.0)
    seed: int = Field(default=0, ge=0)
    workers: int | None = Field(default=None, ge=1)

    @field_validator("degrees")
    @classmethod
    def validate_degrees(cls, v: list[int]) -> list[int]:
        """Degrees must be supported."""
        for p in v:
            if not 0 <= p <= settings.MAX_DEGREE:
                raise ValueError(f"degree must be in 0..{settings.MAX_DEGREE}, got {p}")
        return v


class PerformanceExperimentSpec(BaseModel):
    """Runs on a test signal: genuine-interval counts, lengths and coverage."""

    signal: SignalSpec = Field(default_factory=lambda: SignalSpec(kind=SignalKind.BLOCKS))
    sigma: float = Field(default=10.0, gt=0.0)
    alpha: float = Field(default=settings.DEFAULT_ALPHA, gt=0.0, lt=1.0)
    decay: float = Field(default=settings.DEFAULT_DECAY, gt=1.0)
    replications: int = Field(default=500, ge=1)
    methods: list[Method] = Field(default_factory=lambda: list(Method), min_length=1)
    noise: list[NoiseKind] = Field(default_factory=lambda: [NoiseKind.N1], min_length=1)
    degree: int | None = Field(
        default=None, ge=0, le=settings.MAX_DEGREE, description="Defaults to the signal degree"
    )
    phi: float = Field(default=settings.AR_PHI, gt=-1.0, lt=1.0)
    ar_innovation: ArInnovation = ArInnovation.PRINTED
    seed: int = Field(default=0, ge=0)
    workers: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_signal(self) -> "PerformanceExperimentSpec":
        """A performance run needs change points."""
        if self.signal.kind is SignalKind.NONE:
            raise ValueError("performance experiments need a signal with change points")
        return self


# ============== Reports ==============
class ReportRow(BaseModel):
    """Aggregated metrics of one (method, noise, degree) cell."""

    method: Method
    noise: NoiseKind
    degree: int
    n: int
    replications: int
    coverage: float
    no_genuine: float | None = None
    prop_genuine: float | None = None
    mean_length: float | None = None
    mean_intervals: float
    empty_runs: int


class ExperimentReport(BaseModel):
    """Rows of an experiment plus the spec that produced them."""

    kind: Literal["coverage", "performance"]
    replications: int
    seed: int
    rows: list[ReportRow]
    change_points: list[int] = Field(default_factory=list)
    config: dict
