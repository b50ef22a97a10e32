"""
Configuration and logging setup
Values come from SWDFT_* environment variables or a local .env file
"""

import logging
import os
import sys
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SwdftSettings(BaseSettings):
    """Library-wide defaults; explicit arguments and CLI flags always win"""

    model_config = SettingsConfigDict(env_prefix="SWDFT_", env_file=".env", extra="ignore")

    log_level: str = "INFO"

    # Sliding kernel: re-initialize every row from a direct column this often
    resync_interval: int = Field(default=4096, ge=1)

    # Estimation defaults
    l_min: int = 8
    f_xatol: float = 1e-6
    f_maxiter: int = 200
    jobs: int = 1

    # HTTP service
    api_host: str = "0.0.0.0"
    api_port: int = 8000


def available_cpus() -> int:
    """Worker count for the simulation study when none is given"""
    return os.cpu_count() or 1


settings = SwdftSettings()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Send all package logs to stderr; stdout stays reserved for data"""
    root = logging.getLogger("swdft")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel((level or settings.log_level).upper())
    root.propagate = False
