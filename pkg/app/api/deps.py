"""API dependencies for uploads and request limits."""

from typing import Annotated

from fastapi import Body, File, HTTPException, UploadFile, status
from pydantic import ValidationError

from app.core.config import settings
from app.schemas.detection import DetectionConfig
from app.schemas.experiment import CoverageExperimentSpec, PerformanceExperimentSpec


async def read_csv_upload(file: Annotated[UploadFile, File(description="CSV file")]) -> bytes:
    """Read an uploaded CSV file into memory.

    Args:
        file: Uploaded file

    Returns:
        Raw file content

    Raises:
        HTTPException: If the file exceeds MAX_UPLOAD_SIZE
    """
    content = await file.read(settings.MAX_UPLOAD_SIZE + 1)
    if len(content) > settings.MAX_UPLOAD_SIZE:
        raise HTTPException(
            status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
            detail=f"File exceeds {settings.MAX_UPLOAD_SIZE} bytes",
        )
    return content


def build_config(**fields: object) -> DetectionConfig:
    """Build a DetectionConfig from query parameters, skipping unset ones.

    Raises:
        HTTPException: If the combination does not validate
    """
    try:
        return DetectionConfig(**{k: v for k, v in fields.items() if v is not None})
    except ValidationError as exc:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=exc.errors(include_url=False, include_context=False),
        ) from exc


def _check_replications(replications: int) -> None:
    if replications > settings.MAX_API_REPLICATIONS:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"replications must not exceed {settings.MAX_API_REPLICATIONS}",
        )


def limited_coverage_spec(
    spec: Annotated[CoverageExperimentSpec, Body()],
) -> CoverageExperimentSpec:
    """Coverage spec with the replication cap applied."""
    _check_replications(spec.replications)
    return spec


def limited_performance_spec(
    spec: Annotated[PerformanceExperimentSpec, Body()],
) -> PerformanceExperimentSpec:
    """Performance spec with the replication cap applied."""
    _check_replications(spec.replications)
    return spec
