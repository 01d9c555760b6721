# app/config.py
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from app.errors import ConfigError

logger = logging.getLogger(__name__)

# .env lives at the repository root; real environment variables win over it
ENV_PATH = Path(__file__).resolve().parent.parent / ".env"

LOG_BASES = ("e", "2")


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    log_base: str = "e"
    tolerance: float = 1e-12
    float_digits: int = 12
    max_workers: int = 4
    cache_size: int = 100_000
    max_twice_spin: int = 40


def _read_int(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}")
    if not value > 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def load_settings(env_path: Optional[Path] = None) -> Settings:
    """Build Settings from the environment (and the .env file if present)"""
    load_dotenv(dotenv_path=env_path or ENV_PATH, override=False)

    log_base = os.getenv("CGENTROPY_LOG_BASE", "e").strip()
    if log_base not in LOG_BASES:
        raise ConfigError(f"CGENTROPY_LOG_BASE must be one of {LOG_BASES}, got {log_base!r}")

    return Settings(
        log_level=os.getenv("CGENTROPY_LOG_LEVEL", "WARNING").strip().upper(),
        log_base=log_base,
        tolerance=_read_float("CGENTROPY_TOLERANCE", 1e-12),
        float_digits=_read_int("CGENTROPY_FLOAT_DIGITS", 12, 1),
        max_workers=_read_int("CGENTROPY_MAX_WORKERS", 4, 1),
        cache_size=_read_int("CGENTROPY_CACHE_SIZE", 100_000, 0),
        max_twice_spin=_read_int("CGENTROPY_MAX_TWICE_SPIN", 40, 0),
    )


_settings: Settings | None = None


def get_settings() -> Settings:
    """Lazily built settings singleton"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def reset_settings() -> None:
    """Drop the singleton so the next get_settings() re-reads the environment"""
    global _settings
    _settings = None


def configure_logging(level: Optional[str] = None) -> None:
    """Log records go to stderr; stdout is reserved for command output"""
    level = level or get_settings().log_level
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
