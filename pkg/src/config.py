# src/config.py
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

# Load .env file into environment
load_dotenv()

# Largest cuspidal-support mass any exhaustive enumeration may visit.
DEFAULT_ENUM_BOUND = 12
DEFAULT_OUTPUT_WIDTH = 100
OUTPUT_FORMATS = ("json", "text", "dot")


class ConfigError(RuntimeError):
    """Raised when configuration is missing or invalid."""


def _get_positive_int_env(name: str, default: int) -> int:
    """
    Parse a positive integer environment variable.

    Empty / unset -> default. Anything else that is not a positive
    integer raises ConfigError rather than being ignored.
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise ConfigError(f"{name} must be a positive integer. Got: {raw!r}") from None
    if value <= 0:
        raise ConfigError(f"{name} must be a positive integer. Got: {raw!r}")
    return value


@dataclass(frozen=True)
class Settings:
    # Width hint for the rich text renderer; the only value read from the environment.
    output_width: int

    # Run options; the CLI overrides them per invocation.
    enum_bound: int = DEFAULT_ENUM_BOUND
    debug_crosscheck: bool = False
    output_format: str = "json"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Lazily load settings on first use so importing this module never fails.

    Results must not depend on the environment, so only the width hint
    is read: MSEG_OUTPUT_WIDTH, falling back to COLUMNS.
    """
    fallback = _get_positive_int_env("COLUMNS", DEFAULT_OUTPUT_WIDTH)
    return Settings(output_width=_get_positive_int_env("MSEG_OUTPUT_WIDTH", fallback))
