from typing import Annotated, Any, Literal, Self

from pydantic import BeforeValidator, computed_field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def parse_optional_bool(v: Any) -> bool | None:
    if isinstance(v, str) and v.strip().lower() in ("", "auto"):
        return None
    return v  # type: ignore[no-any-return]


class Settings(BaseSettings):
    """Process-wide settings (environment / ``.env``).

    Run parameters of a single solve live in the TOML run config
    (``app.cli.run_config``); this class only carries what is shared by every
    command in the process.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_ignore_empty=True,
        extra="ignore",
    )
    PROJECT_NAME: str = "plapsys"
    ENVIRONMENT: Literal["local", "ci", "production"] = "local"

    # -------------------------------------------------------------------------
    # Logging
    # -------------------------------------------------------------------------
    LOG_LEVEL: str = "INFO"
    # None = decide from ENVIRONMENT (JSON everywhere except local)
    LOG_JSON: Annotated[bool | None, BeforeValidator(parse_optional_bool)] = None

    # -------------------------------------------------------------------------
    # Sweep mode
    # -------------------------------------------------------------------------
    SWEEP_MAX_WORKERS: int = 8

    # -------------------------------------------------------------------------
    # Numerical sup defining C4 (Moser iteration)
    # -------------------------------------------------------------------------
    C4_T_MAX: float = 1.0e4
    C4_GRID_POINTS: int = 4096

    @computed_field  # type: ignore[prop-decorator]
    @property
    def log_json(self) -> bool:
        if self.LOG_JSON is not None:
            return self.LOG_JSON
        return self.ENVIRONMENT != "local"

    @model_validator(mode="after")
    def _check_numeric_knobs(self) -> Self:
        if self.SWEEP_MAX_WORKERS < 1:
            raise ValueError("SWEEP_MAX_WORKERS must be >= 1")
        if self.C4_T_MAX <= 1.0:
            raise ValueError("C4_T_MAX must be > 1")
        if self.C4_GRID_POINTS < 64:
            raise ValueError("C4_GRID_POINTS must be >= 64")
        return self


settings = Settings()
