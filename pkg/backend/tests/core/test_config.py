"""Tests for process settings."""

import pytest
from pydantic import ValidationError

from app.core.config import Settings


def test_defaults() -> None:
    s = Settings(_env_file=None)
    assert s.PROJECT_NAME == "plapsys"
    assert s.SWEEP_MAX_WORKERS == 8
    assert s.C4_T_MAX == 1.0e4
    assert s.C4_GRID_POINTS == 4096


class TestLogJson:
    def test_auto_is_console_locally(self) -> None:
        assert Settings(_env_file=None, ENVIRONMENT="local").log_json is False

    def test_auto_is_json_outside_local(self) -> None:
        assert Settings(_env_file=None, ENVIRONMENT="ci").log_json is True
        assert Settings(_env_file=None, ENVIRONMENT="production").log_json is True

    def test_explicit_value_wins(self) -> None:
        assert Settings(_env_file=None, ENVIRONMENT="production", LOG_JSON=False).log_json is False

    @pytest.mark.parametrize("raw", ["", "auto", "AUTO"])
    def test_auto_strings(self, raw: str) -> None:
        assert Settings(_env_file=None, LOG_JSON=raw).LOG_JSON is None


def test_env_overrides(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("SWEEP_MAX_WORKERS", "3")
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    s = Settings(_env_file=None)
    assert s.SWEEP_MAX_WORKERS == 3
    assert s.LOG_LEVEL == "DEBUG"


@pytest.mark.parametrize(
    "field, value",
    [("SWEEP_MAX_WORKERS", 0), ("C4_T_MAX", 1.0), ("C4_GRID_POINTS", 10)],
)
def test_numeric_knobs_rejected(field: str, value: float) -> None:
    with pytest.raises(ValidationError):
        Settings(_env_file=None, **{field: value})
