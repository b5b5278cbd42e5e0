#!/usr/bin/env python

"""
Console logging for the workbench via loguru.

Log lines go to /dev/tty (CON on Windows) when one can be opened, else to
stderr, so JSON reports printed on stdout can be piped without log noise.
"""

import os
import sys
from typing import Optional, TextIO

from loguru import logger

LOG_LEVEL_ENV = "SUCCINCTNESS_WORKBENCH_LOG_LEVEL"
LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <7}</level> | "
    "<cyan>{extra[name]}</cyan> | <level>{message}</level>"
)

_sink: Optional[TextIO] = None
_level: Optional[str] = None


def get_console_sink() -> TextIO:
    """The terminal stream, opened once per process, or stderr."""
    global _sink
    if _sink is None:
        try:
            if os.name == "nt":
                _sink = open("CON", "w", buffering=1)
            elif os.path.exists("/dev/tty"):
                _sink = open("/dev/tty", "w", buffering=1)
        except OSError:
            _sink = None
        if _sink is None:
            _sink = sys.stderr
    return _sink


def setup_tty_logger(level: Optional[str] = None):
    """(Re)configure the single console handler; a no-op when the level is unchanged."""
    global _level
    level = (level or os.getenv(LOG_LEVEL_ENV) or "INFO").upper()
    if level == _level:
        return logger

    logger.remove()
    logger.configure(extra={"name": "workbench"})
    logger.add(get_console_sink(), level=level, colorize=True, format=LOG_FORMAT)
    _level = level
    return logger


def get_logger(name: str):
    """Get a logger instance with the specified name."""
    return setup_tty_logger(_level).bind(name=name)
