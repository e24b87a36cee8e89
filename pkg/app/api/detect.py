"""Change point detection routes."""

import io
from typing import Annotated

from fastapi import APIRouter, Depends, Query

from app.api.deps import build_config, read_csv_upload
from app.core.config import settings
from app.models import Estimator, Method, NoiseMode, Selection
from app.schemas.detection import DetectionResponse, DetectRequest
from app.services.detection_service import (
    build_detection_response,
    detect_csv,
    detect_values,
)

router = APIRouter(prefix="/detect", tags=["Detection"])


@router.post("", response_model=DetectionResponse)
def detect_series(request: DetectRequest) -> DetectionResponse:
    """Detect significant intervals in inline values.

    Args:
        request: Values and detection configuration

    Returns:
        Intervals, threshold and scale estimate
    """
    result = detect_values(request.values, request.config)
    return build_detection_response(result)


@router.post("/upload", response_model=DetectionResponse)
def detect_upload(
    content: Annotated[bytes, Depends(read_csv_upload)],
    column: str | None = None,
    degree: int = Query(0, ge=0, le=settings.MAX_DEGREE),
    alpha: float | None = Query(None, gt=0.0, lt=1.0),
    decay: float | None = Query(None, gt=1.0),
    min_scale: int | None = Query(None, ge=2),
    mode: NoiseMode | None = None,
    estimator: Estimator | None = None,
    method: Method | None = None,
    lrv_block: int | None = Query(None, ge=1),
    selection: Selection | None = None,
) -> DetectionResponse:
    """Detect significant intervals in one column of an uploaded CSV file.

    Args:
        content: File content
        column: Header name or 0-based index; first column by default

    Returns:
        Intervals, threshold and scale estimate
    """
    cfg = build_config(
        degree=degree,
        alpha=alpha,
        decay=decay,
        min_scale=min_scale,
        mode=mode,
        estimator=estimator,
        method=method,
        lrv_block=lrv_block,
        selection=selection,
    )
    _, result = detect_csv(io.BytesIO(content), cfg, column)
    return build_detection_response(result)
