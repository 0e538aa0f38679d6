"""Configuration management using Pydantic Settings."""

import os
from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO")
    log_file: Path = Field(default=Path("logs/tuber.log"))

    # Pretrained weights cache (TUBER_CACHE)
    tuber_cache: Path = Field(default=Path.home() / ".cache" / "tuber")

    # Runs
    runs_dir: Path = Field(default=Path("runs"))

    # Compute
    device: Literal["auto", "cpu", "cuda"] = Field(default="auto")
    num_workers: int = Field(default=0, ge=0, le=32)
    max_parallel_jobs: int = Field(default=1, ge=1, le=32)

    # Grid search
    grid_cap: int = Field(default=64, ge=1)

    @field_validator("log_level")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Validate log level name."""
        v = v.upper()
        if v not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return v

    def resolve_device(self) -> str:
        """Get the torch device string for this environment."""
        if self.device != "auto":
            return self.device

        import torch

        return "cuda" if torch.cuda.is_available() else "cpu"

    def export_weights_cache(self) -> Path:
        """Point torchvision's hub cache at the weights cache directory."""
        cache = self.tuber_cache.expanduser()
        cache.mkdir(parents=True, exist_ok=True)
        os.environ["TORCH_HOME"] = str(cache)
        return cache


# Singleton instance
settings = Settings()
