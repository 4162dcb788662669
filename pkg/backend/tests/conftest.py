import os
from collections.abc import Iterator
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from app.core.logging_config import configure_logging
from app.engines.fixedpoint import SolverContext, build_context
from app.engines.hypotheses import ExponentConfig
from app.engines.plap_radial import BoundaryClosure
from app.engines.radial_grid import RadialGrid, build_grid
from app.engines.weights import WeightFamily, WeightSpec

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=20, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))

CONFIGS_DIR = Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture(scope="session")
def std_cfg() -> ExponentConfig:
    """N=3, p1=p2=2, alpha1=beta2=-1/2, beta1=alpha2=1/2, zeta1=zeta2=4."""
    return ExponentConfig(
        N=3,
        p1=2.0,
        p2=2.0,
        alpha1=-0.5,
        alpha2=0.5,
        beta1=0.5,
        beta2=-0.5,
        zeta1=4.0,
        zeta2=4.0,
    )


@pytest.fixture(scope="session")
def gaussian() -> WeightSpec:
    return WeightSpec(family=WeightFamily.GAUSSIAN, A=1.0, lam=1.0)


@pytest.fixture(scope="session")
def small_grid() -> RadialGrid:
    return build_grid(3, 8.0, 257)


@pytest.fixture(scope="session")
def std_config_path() -> Path:
    return CONFIGS_DIR / "std.toml"


@pytest.fixture(scope="session")
def std_context(std_cfg: ExponentConfig, gaussian: WeightSpec, small_grid: RadialGrid) -> SolverContext:
    return build_context(std_cfg, gaussian, gaussian, small_grid, boundary=BoundaryClosure.FARFIELD)


@pytest.fixture(autouse=True)
def _reset_log_stream() -> Iterator[None]:
    # the root handler binds sys.stderr at configure time; rebind once capsys has let go
    yield
    configure_logging()
