"""Manages the logs for the simulator, oracles and CLI."""

import logging
import os
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[3]
LOG_DIR = Path(os.environ.get("BLEVY_LOG_DIR", PROJECT_ROOT / "logs"))


def setup_logger(
    name: str,
    log_file: str,
    level: int = logging.INFO,
) -> logging.Logger:
    """Set up a logger with both file and console handlers.

    Parameters
    ----------
    name : str
        Suffix of the logger name; the full name is ``blevy.<name>``.
    log_file : str
        File name (inside ``LOG_DIR``) receiving this logger's records.
    level : int, optional
        Initial logging level. Default is ``logging.INFO``.

    Returns
    -------
    logging.Logger
        The configured logger.

    """
    logger = logging.getLogger(f"blevy.{name}")
    logger.setLevel(level)

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    # Prevent duplicate handlers if this logger is called again
    if not logger.handlers:
        try:
            LOG_DIR.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(LOG_DIR / log_file, mode="a")
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except OSError:
            # read-only install location; console logging still works
            pass

        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    return logger


def set_level(level: int | str) -> None:
    """Set the level of every ``blevy.*`` logger created so far."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    for name, obj in logging.Logger.manager.loggerDict.items():
        if name.startswith("blevy.") and isinstance(obj, logging.Logger):
            obj.setLevel(level)
