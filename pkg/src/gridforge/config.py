"""
Library configuration using pydantic-settings.

Loads configuration from GRIDFORGE_* environment variables and .env files.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Scales the default Solovev coefficients so the magnetic axis sits near
# psi = -31 and the separatrix at psi = 0.
DEFAULT_SOLOVEV_AMPLITUDE = 547.891714877869


class Settings(BaseSettings):
    """Library settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="GRIDFORGE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Parallelism
    threads: int = Field(default=4, ge=1, description="Maximum worker threads for streamline batches")
    streamline_chunk: int = Field(
        default=64, ge=1, description="Streamlines integrated together in one vectorized batch"
    )

    # Numerics
    solovev_amplitude: float = Field(
        default=DEFAULT_SOLOVEV_AMPLITUDE,
        gt=0,
        description="Overall flux amplitude applied to the Solovev field",
    )
    singular_tolerance: float = Field(
        default=1e-14, gt=0, description="Relative determinant floor for Jacobian inversion"
    )

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING", description="Log level"
    )
    log_format: Literal["json", "text"] = Field(default="text", description="Log format")


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Convenience export
settings = get_settings()
