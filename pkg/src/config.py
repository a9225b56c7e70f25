"""Configuration for the quantum oblivious transfer simulator."""

import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from src import __version__

# Load environment variables from .env file
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.environ.get(name, default).lower() in ("true", "1", "yes")


class SimulationConfig(BaseModel):
    """Configuration for Monte Carlo simulation."""

    default_seed: int = Field(
        default_factory=lambda: int(os.environ.get("QOTSIM_SEED", "20210611"))
    )
    default_rounds: int = Field(
        default_factory=lambda: int(os.environ.get("QOTSIM_ROUNDS", "100000"))
    )
    threads: int = Field(default_factory=lambda: int(os.environ.get("QOTSIM_THREADS", "1")))
    batch_size: int = Field(
        default_factory=lambda: int(os.environ.get("QOTSIM_BATCH_SIZE", "10000"))
    )
    show_progress: bool = Field(default_factory=lambda: _env_bool("QOTSIM_PROGRESS", "false"))


class OptimizerConfig(BaseModel):
    """Configuration for the numerical optimizers."""

    alice_restarts: int = Field(
        default_factory=lambda: int(os.environ.get("QOTSIM_ALICE_RESTARTS", "20"))
    )
    lu_restarts: int = Field(
        default_factory=lambda: int(os.environ.get("QOTSIM_LU_RESTARTS", "50"))
    )
    max_iterations: int = Field(
        default_factory=lambda: int(os.environ.get("QOTSIM_MAX_ITERATIONS", "2000"))
    )
    retry_attempts: int = Field(
        default_factory=lambda: int(os.environ.get("QOTSIM_RETRY_ATTEMPTS", "3"))
    )


class ToleranceConfig(BaseModel):
    """Numerical tolerances shared by the linear-algebra layer."""

    hermitian: float = 1e-12
    trace: float = 1e-10
    psd: float = 1e-10
    default: float = 1e-9


class LoggingConfig(BaseModel):
    """Configuration for logging."""

    log_level: str = Field(default_factory=lambda: os.environ.get("LOG_LEVEL", "WARNING"))


class Config(BaseModel):
    """Main configuration for the application."""

    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    tolerance: ToleranceConfig = Field(default_factory=ToleranceConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    data_dir: Path = Field(
        default_factory=lambda: Path(
            os.environ.get("QOTSIM_DATA_DIR", Path(__file__).parent / "data" / "tables")
        )
    )
    artifact_version: str = __version__


@lru_cache
def get_config() -> Config:
    """Get application configuration (cached).

    Returns:
        Config: Application configuration
    """
    config = Config()
    return config


def validate_config(config: Optional[Config] = None) -> Optional[str]:
    """Validate the configuration and return an error message if invalid.

    Args:
        config: Configuration to check, defaults to the cached one

    Returns:
        Optional[str]: Error message if invalid, None if valid
    """
    config = config or get_config()

    if config.simulation.threads < 1:
        return "QOTSIM_THREADS must be at least 1"

    if config.simulation.batch_size < 1:
        return "QOTSIM_BATCH_SIZE must be at least 1"

    if not isinstance(logging.getLevelName(config.logging.log_level.upper()), int):
        return f"Unknown LOG_LEVEL: {config.logging.log_level}"

    if not config.data_dir.is_dir():
        return f"Count table directory not found: {config.data_dir}"

    return None
