"""Application configuration."""

import math
from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # App settings
    APP_NAME: str = "Change Point Inference API"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False
    ENVIRONMENT: Literal["development", "production", "test"] = "development"
    LOG_LEVEL: str = "INFO"

    # API settings
    API_PREFIX: str = "/api"
    CORS_ORIGINS: list[str] = ["http://localhost:3000", "http://localhost:5173"]
    MAX_UPLOAD_SIZE: int = 10485760  # 10MB
    MAX_API_REPLICATIONS: int = 2000

    # Detection defaults
    DEFAULT_ALPHA: float = 0.1
    DEFAULT_DECAY: float = math.sqrt(2.0)
    MAX_DEGREE: int = 10

    # Series truncation for the extreme-value constants
    P_INF_TERM_TOL: float = 1e-15
    P_INF_TOTAL_TOL: float = 1e-12
    H1_TERM_TOL: float = 1e-12

    # Simulation harness
    AR_PHI: float = 0.5
    AR_BURN_IN: int = 500
    SIGNALS_FILE: Path = DATA_DIR / "signals.yaml"
    CPINFER_THREADS: int | None = None  # caps harness workers; None -> cpu count

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalise and validate the log level name."""
        level = str(v).upper()
        if level not in {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}:
            raise ValueError(f"LOG_LEVEL must be a standard logging level, got {v!r}")
        return level

    @field_validator("CPINFER_THREADS")
    @classmethod
    def validate_threads(cls, v: int | None) -> int | None:
        """Reject non-positive worker caps."""
        if v is not None and v < 1:
            raise ValueError("CPINFER_THREADS must be a positive integer")
        return v


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
