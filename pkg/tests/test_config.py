from __future__ import annotations

import pytest

from src.config import DEFAULT_ENUM_BUDGET, load_settings
from src.engine.errors import ConfigurationError


def test_defaults_when_environment_is_empty(monkeypatch):
    for name in ("LEIBNIZ_ARITY_CAP", "LEIBNIZ_ENUM_BUDGET", "LEIBNIZ_WORKERS", "LEIBNIZ_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)

    settings = load_settings()

    assert settings.arity_cap == 6
    assert settings.enum_budget == DEFAULT_ENUM_BUDGET
    assert settings.workers == 4
    assert settings.log_level == "INFO"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("LEIBNIZ_ENUM_BUDGET", "25")
    monkeypatch.setenv("LEIBNIZ_WORKERS", "2")
    monkeypatch.setenv("LEIBNIZ_LOG_LEVEL", "debug")

    settings = load_settings()

    assert settings.enum_budget == 25
    assert settings.workers == 2
    assert settings.log_level == "DEBUG"


def test_settings_are_cached_until_cleared(monkeypatch):
    monkeypatch.setenv("LEIBNIZ_WORKERS", "3")
    first = load_settings()
    monkeypatch.setenv("LEIBNIZ_WORKERS", "7")

    assert load_settings() is first
    load_settings.cache_clear()
    assert load_settings().workers == 7


@pytest.mark.parametrize("raw", ["zero", "0", "-3", "1.5"])
def test_invalid_integers_are_rejected(monkeypatch, raw):
    monkeypatch.setenv("LEIBNIZ_WORKERS", raw)

    with pytest.raises(ConfigurationError, match="LEIBNIZ_WORKERS must be a positive integer"):
        load_settings()
