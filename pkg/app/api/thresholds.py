"""Threshold diagnostics routes."""

from fastapi import APIRouter, Query

from app.core.config import settings
from app.models import NoiseMode
from app.schemas.detection import default_min_scale
from app.schemas.threshold import ThresholdDiagnostics, ThresholdParams
from app.services.thresholds import threshold_diagnostics

router = APIRouter(prefix="/thresholds", tags=["Thresholds"])


@router.get("", response_model=ThresholdDiagnostics)
def get_thresholds(
    n: int = Query(..., ge=4),
    alpha: float = Query(settings.DEFAULT_ALPHA, gt=0.0, lt=1.0),
    decay: float = Query(settings.DEFAULT_DECAY, gt=1.0),
    degree: int = Query(0, ge=0, le=settings.MAX_DEGREE),
    min_scale: int | None = Query(None, ge=2),
    mode: NoiseMode = NoiseMode.GAUSSIAN,
) -> ThresholdDiagnostics:
    """Extreme-value constants and lambda_alpha for the given parameters.

    ``min_scale`` defaults to floor(ln n) (gaussian) or floor(sqrt(n) / 2) (dependent).
    """
    params = ThresholdParams(
        n=n,
        min_scale=min_scale or default_min_scale(n, mode),
        decay=decay,
        degree=degree,
        alpha=alpha,
        mode=mode,
    )
    return threshold_diagnostics(params)
