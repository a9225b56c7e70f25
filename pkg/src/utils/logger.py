"""Logging for the simulator.

Records go to stderr through ``tqdm.write`` so they do not tear the Monte
Carlo progress bars. Stdout carries command output only.
"""

import logging
import sys
from typing import Optional

from tqdm import tqdm

from src.config import get_config

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class TqdmHandler(logging.StreamHandler):
    """Stream handler that writes around active tqdm bars."""

    def __init__(self):
        super().__init__(sys.stderr)

    def emit(self, record: logging.LogRecord) -> None:
        try:
            tqdm.write(self.format(record), file=self.stream)
            self.flush()
        except Exception:
            self.handleError(record)


def resolve_level(level: str) -> int:
    """Numeric level for a name such as ``"info"``.

    Raises:
        ValueError: If the name is not a standard logging level
    """
    value = logging.getLevelName(level.upper())
    if not isinstance(value, int):
        raise ValueError(f"Unknown log level {level!r}")
    return value


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """Get a configured logger.

    Args:
        name: Logger name, usually ``__name__``
        level: Level name overriding ``LOG_LEVEL``

    Returns:
        Logger with a single stderr handler
    """
    level_obj = resolve_level(level or get_config().logging.log_level)

    logger = logging.getLogger(name)
    logger.setLevel(level_obj)

    if not logger.handlers:
        handler = TqdmHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
    for handler in logger.handlers:
        handler.setLevel(level_obj)

    return logger
