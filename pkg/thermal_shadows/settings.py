# settings.py
"""Environment-driven settings.

Values come from the process environment, optionally seeded from a ``.env``
file in the working directory. Nothing here is secret; the file only saves
typing ``export`` for long experiment sessions.
"""
import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from .errors import ConfigError

DEFAULT_DENSE_LIMIT = 12
DEFAULT_ROTATION_EPS = 1e-10

_dotenv_loaded = False


@dataclass(frozen=True)
class Settings:
    dense_limit: int = DEFAULT_DENSE_LIMIT
    rotation_eps: float = DEFAULT_ROTATION_EPS
    workers: int = 1
    log_level: str = "INFO"
    progress: bool = False


def _load_env_file():
    global _dotenv_loaded
    if not _dotenv_loaded:
        load_dotenv(override=False)
        _dotenv_loaded = True


def _read(name, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ConfigError(name, f"cannot parse {raw!r}") from None


def _flag(raw):
    value = raw.lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def get_settings():
    """Read the current settings from the environment."""
    _load_env_file()
    dense_limit = _read("THERMAL_SHADOWS_DENSE_LIMIT", int, DEFAULT_DENSE_LIMIT)
    if dense_limit < 1:
        raise ConfigError("THERMAL_SHADOWS_DENSE_LIMIT", "must be >= 1")
    rotation_eps = _read("THERMAL_SHADOWS_ROTATION_EPS", float, DEFAULT_ROTATION_EPS)
    if not 0 < rotation_eps < 1:
        raise ConfigError("THERMAL_SHADOWS_ROTATION_EPS", "must lie in (0, 1)")
    workers = _read("THERMAL_SHADOWS_WORKERS", int, 1)
    if workers < 1:
        raise ConfigError("THERMAL_SHADOWS_WORKERS", "must be >= 1")
    log_level = _read("THERMAL_SHADOWS_LOG_LEVEL", str, "INFO").upper()
    if log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ConfigError("THERMAL_SHADOWS_LOG_LEVEL", f"unknown level {log_level!r}")
    progress = _read("THERMAL_SHADOWS_PROGRESS", _flag, False)
    return Settings(
        dense_limit=dense_limit,
        rotation_eps=rotation_eps,
        workers=workers,
        log_level=log_level,
        progress=progress,
    )


def configure_logging(level=None):
    """Install the ``[LEVEL] message`` console handler on the root logger."""
    if level is None:
        level = get_settings().log_level
    logging.basicConfig(
        level=level,
        format="[%(levelname)s] %(message)s",
        force=True,
    )
