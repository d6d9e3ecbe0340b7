"""Logging setup for the command-line entry point."""

import logging
import os
import sys
from typing import Optional

from ..exceptions import ConfigError

LOG_LEVEL_ENV = "LINFRIC_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DEFAULT_LEVEL = "WARNING"


def configure_logging(level: Optional[str] = None) -> int:
    """
    Configure the root handler once per process.

    Args:
        level: Level name. Falls back to ``LINFRIC_LOG_LEVEL``, then ``WARNING``.

    Returns:
        The numeric level in effect.

    Raises:
        ConfigError: If the level name is unknown.
    """
    name = (level or os.getenv(LOG_LEVEL_ENV) or DEFAULT_LEVEL).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ConfigError(f"unknown log level {name!r}")
    logging.basicConfig(level=numeric, format=LOG_FORMAT, stream=sys.stderr, force=True)
    return numeric
