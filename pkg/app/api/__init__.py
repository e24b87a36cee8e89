"""API routes package."""

from . import detect, experiments, thresholds

__all__ = ["detect", "experiments", "thresholds"]
