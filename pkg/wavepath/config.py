"""
wavepath Configuration Module
=============================

Centralized numerics defaults using Pydantic Settings.

Loads configuration from:
    1. Environment variables (prefix WAVEPATH_)
    2. .env file (if present)
    3. Default values

Per-run scenario files (shared.contracts.scenario) seed their tolerance
block from these values, so every default that affects a run is written
to the run manifest.

Usage:
    from wavepath.config import settings

    print(settings.rtol)
    print(settings.density_floor)

Author: wavepath Team
Version: 1.0.0
"""

from contextlib import contextmanager
from functools import lru_cache
from typing import Any, Iterator

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Numerics and runtime settings loaded from environment variables.

    Naming convention: WAVEPATH_UPPER_SNAKE_CASE in env, lower_snake_case in code.
    """

    model_config = SettingsConfigDict(
        env_prefix="WAVEPATH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # =========================================================================
    # Application Settings
    # =========================================================================

    app_name: str = Field(default="wavepath", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    log_level: str = Field(default="INFO", description="Logging level")
    log_json: bool = Field(default=True, description="Render logs as JSON")
    threads: int = Field(default=1, ge=1, le=256, description="Worker threads for sweeps")

    # =========================================================================
    # Ermakov Integration
    # =========================================================================

    rtol: float = Field(default=1e-10, gt=0.0, lt=1.0, description="Relative tolerance")
    atol: float = Field(default=1e-12, gt=0.0, lt=1.0, description="Absolute tolerance")
    amplitude_floor: float = Field(
        default=1e-8,
        gt=0.0,
        description="Positivity floor for the Ermakov amplitude alpha"
    )
    ermakov_residual_tolerance: float = Field(
        default=1e-6,
        gt=0.0,
        description="Bound on |alpha''/alpha + V - 4 hbar^2/alpha^4|"
    )
    amplitude_growth_warning: float = Field(
        default=50.0,
        gt=1.0,
        description="max(alpha)/min(alpha) ratio above which a drive is reported unbounded"
    )

    # =========================================================================
    # Wavepacket / Flow
    # =========================================================================

    density_floor: float = Field(
        default=1e-12,
        gt=0.0,
        lt=1.0,
        description="Node floor, relative to the instantaneous peak density"
    )
    caustic_epsilon: float = Field(
        default=1e-3,
        gt=0.0,
        description="Exclusion band (rad) around multiples of pi for the propagator"
    )
    crossing_delta: float = Field(
        default=1e-6,
        gt=0.0,
        description="Resolution below which two Bohmian trajectories coincide"
    )
    max_displacement_scale: float = Field(
        default=0.01,
        gt=0.0,
        description="Max Bohmian displacement per step, in units of alpha0"
    )
    bohmian_sample_dt: float = Field(
        default=0.01,
        gt=0.0,
        description="Spacing of recorded Bohmian samples"
    )
    equivariance_margin: float = Field(
        default=0.1,
        gt=0.0,
        description="Allowed excess of the transported L1 score over a fresh sample of rho(t1)"
    )

    # =========================================================================
    # Weak Measurement
    # =========================================================================

    compatibility_threshold: float = Field(
        default=1e-8,
        gt=0.0,
        description="Overlap magnitude below which weak-value records vanish"
    )
    window_scale: float = Field(
        default=0.25,
        gt=0.0,
        description="Default WMA window width, in units of alpha0"
    )
    overlap_flag_level: float = Field(
        default=1e-4,
        gt=0.0,
        lt=1.0,
        description="Relative branch density above which a WMA sees that branch"
    )

    # =========================================================================
    # Observables
    # =========================================================================

    recurrence_radius_scale: float = Field(
        default=0.25,
        gt=0.0,
        description="Default recurrence disc radius, in units of alpha0"
    )
    recurrence_prominence: float = Field(
        default=0.05,
        gt=0.0,
        lt=1.0,
        description="Peak prominence threshold as a fraction of max P(t)"
    )

    # =========================================================================
    # Output
    # =========================================================================

    csv_float_format: str = Field(
        default="%.17g",
        description="printf-style float format for CSV tables"
    )


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached application settings.

    Uses LRU cache to ensure settings are loaded only once.

    Returns:
        Settings instance
    """
    return Settings()


# Convenience alias
settings = get_settings()


@contextmanager
def override_settings(**values: Any) -> Iterator[Settings]:
    """
    Temporarily replace fields of the shared settings object.

    Used by the CLI to apply a scenario's tolerance block for one run.
    Unknown field names raise AttributeError before anything changes.
    """
    current = get_settings()
    for name in values:
        if name not in Settings.model_fields:
            raise AttributeError(f"unknown setting: {name}")
    saved = {name: getattr(current, name) for name in values}
    try:
        for name, value in values.items():
            setattr(current, name, value)
        yield current
    finally:
        for name, value in saved.items():
            setattr(current, name, value)
