"""
TOML run configuration.

One file describes one run: exponents, the two weights, the grid, solver and
bound options, and where outputs go. Only the file is read; environment
variables never leak into a run config (process knobs live in
``app.core.config.Settings``).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

from app.core.param_type import Real, RealList
from app.engines.fixedpoint import check_schedule, default_schedule
from app.engines.hypotheses import ExponentConfig
from app.engines.plap_radial import BoundaryClosure
from app.engines.radial_grid import MIN_NODES, Grading, RadialGrid, build_grid
from app.engines.weights import WeightSpec


class ConfigError(ValueError):
    """Raised when a run config cannot be read or does not validate."""

    pass


class WeightsSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    a1: WeightSpec
    a2: WeightSpec


class GridSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    N: int | None = None
    r_max: Real = 8.0
    nodes: int = 2048
    grading: Grading = Grading.UNIFORM
    ratio: Real | None = None

    @model_validator(mode="after")
    def _check_grid(self) -> Self:
        if not self.r_max > 0.0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if self.nodes < MIN_NODES:
            raise ValueError(f"nodes must be >= {MIN_NODES}, got {self.nodes}")
        if self.grading is Grading.GEOMETRIC and not (self.ratio or 0.0) > 1.0:
            raise ValueError(f"geometric grading needs ratio > 1, got {self.ratio}")
        return self


class SolverSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    theta: Real = 1.0
    tol: Real = 1e-8
    max_iter: int = 200
    eps_schedule: RealList | None = None
    eps_steps: int = 6
    residual_tol: Real = 1e-6
    truncation_tol: Real = 1e-6
    boundary: BoundaryClosure = BoundaryClosure.DIRICHLET
    test_functions: int = 20

    @model_validator(mode="after")
    def _check_solver(self) -> Self:
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta must lie in ]0, 1], got {self.theta}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.test_functions < 1:
            raise ValueError("need at least one test function")
        self.schedule()
        return self

    def schedule(self) -> list[float]:
        if self.eps_schedule is not None:
            return check_schedule(self.eps_schedule)
        return default_schedule(self.eps_steps)


class BoundsSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    xi1: Real | None = None
    xi2: Real | None = None
    kappa0: Real = 0.0
    tail_tol: Real = 1e-8
    convention: Literal["talenti", "unit"] = "talenti"


class OutputSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    directory: Path = Path("out")
    formats: list[Literal["json", "csv", "svg"]] = Field(
        default_factory=lambda: ["json", "csv", "svg"]
    )


class RunConfig(BaseSettings):
    model_config = SettingsConfigDict(extra="forbid", frozen=True)

    exponents: ExponentConfig
    weight: WeightsSection
    grid: GridSection = GridSection()
    solver: SolverSection = SolverSection()
    bounds: BoundsSection = BoundsSection()
    output: OutputSection = OutputSection()

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @model_validator(mode="after")
    def _check_dimension(self) -> Self:
        if self.grid.N is not None and self.grid.N != self.exponents.N:
            raise ValueError(
                f"grid.N={self.grid.N} differs from exponents.N={self.exponents.N}"
            )
        return self

    def build_grid(self) -> RadialGrid:
        return build_grid(
            self.exponents.N, self.grid.r_max, self.grid.nodes, self.grid.grading, self.grid.ratio
        )


def load_run_config(path: str | Path) -> RunConfig:
    """Read and validate a TOML run config.

    Raises:
        ConfigError: missing file, TOML syntax error, or failed validation.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = TomlConfigSettingsSource(RunConfig, toml_file=path)()
        return RunConfig(**data)
    except (OSError, ValueError) as e:
        raise ConfigError(f"{path}: {e}") from e


def config_hash(run: RunConfig) -> str:
    """sha256 of the canonical JSON of everything except the output section."""
    payload = run.model_dump(mode="json", exclude={"output"}, by_alias=True)
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
