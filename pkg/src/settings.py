"""
Settings for the superbider verification tool.

Values come from `.config/config.env` when present, then from the process
environment; command-line flags override both.
"""

import logging.config
import os
from pathlib import Path

from dotenv import load_dotenv

from src.linalg.fields import DEFAULT_PRIME

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

VERSION = "1.0.0"

load_dotenv(".config/config.env")


def _int_setting(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        logging.getLogger(__name__).warning("Ignoring %s=%r: not an integer", name, value)
        return default


PRIME = _int_setting("SUPERBIDER_PRIME", DEFAULT_PRIME)
SEED = _int_setting("SUPERBIDER_SEED", 0)
WORKERS = _int_setting("SUPERBIDER_WORKERS", 1)
BLOCK_LIMIT = _int_setting("SUPERBIDER_BLOCK_LIMIT", 0)
PROGRESS = bool(_int_setting("SUPERBIDER_PROGRESS", 0))
OUT_DIR = os.getenv("SUPERBIDER_OUT_DIR", "out")

# Logger configuration
log_file_path = os.path.join(OUT_DIR, "logs", "verification.log")


def logging_config(log_file: str) -> dict:
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "verbose": {
                "format": "{levelname} {asctime} {message}",
                "style": "{",
            },
        },
        "handlers": {
            "file": {
                "level": "DEBUG",
                "class": "logging.FileHandler",
                "filename": log_file,
                "formatter": "verbose",
                "encoding": "utf-8",
            },
        },
        "loggers": {
            "src": {
                "handlers": ["file"],
                "level": "DEBUG",
                "propagate": True,
            },
        },
    }


LOGGING = logging_config(log_file_path)


def configure_logging(out_dir: str | None = None) -> str:
    """
    Apply the logging configuration, creating the log directory on demand.
    """
    log_file = log_file_path if out_dir is None else os.path.join(out_dir, "logs", "verification.log")
    os.makedirs(os.path.dirname(log_file), exist_ok=True)
    logging.config.dictConfig(logging_config(log_file))
    return log_file
