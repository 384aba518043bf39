"""
Runtime configuration for the deformation-map workbench.

Values are read from the environment (optionally populated from a local
``.env`` file) once per process and exposed as an immutable ``Settings``
object.

Environment variables:
    - LEIBNIZ_ARITY_CAP (optional, default: 6)
    - LEIBNIZ_ENUM_BUDGET (optional, default: 1000000)
    - LEIBNIZ_WORKERS (optional, default: 4)
    - LEIBNIZ_LOG_LEVEL (optional, default: INFO)
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from src.engine.errors import ConfigurationError

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_ARITY_CAP = 6
DEFAULT_ENUM_BUDGET = 10**6
DEFAULT_WORKERS = 4


@dataclass(frozen=True)
class Settings:
    """Process-wide knobs.

    Attributes:
        arity_cap: Largest arity a multilinear map may have.
        enum_budget: Largest number of candidate maps an exhaustive scan may visit.
        workers: Thread workers used by enumeration.
        log_level: Name of the root log level.
    """

    arity_cap: int = DEFAULT_ARITY_CAP
    enum_budget: int = DEFAULT_ENUM_BUDGET
    workers: int = DEFAULT_WORKERS
    log_level: str = "INFO"


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ConfigurationError(f"{name} must be a positive integer, got {raw!r}")
    return value


@lru_cache(maxsize=1)
def load_settings() -> Settings:
    """
    Build the settings from the environment.

    Returns:
        A frozen Settings instance (cached; call ``load_settings.cache_clear()``
        after changing the environment).

    Raises:
        ConfigurationError: If a numeric variable is not a positive integer.
    """
    settings = Settings(
        arity_cap=_positive_int("LEIBNIZ_ARITY_CAP", DEFAULT_ARITY_CAP),
        enum_budget=_positive_int("LEIBNIZ_ENUM_BUDGET", DEFAULT_ENUM_BUDGET),
        workers=_positive_int("LEIBNIZ_WORKERS", DEFAULT_WORKERS),
        log_level=os.getenv("LEIBNIZ_LOG_LEVEL", "INFO").upper(),
    )
    logger.debug(f"[CONFIG] {settings}")
    return settings
