"""
Parameter sweeps: one full solve per value, run in a thread pool.

Each point is independent; rows come back in input order. Workers run in a
copy of the caller's context so command-level log fields reach them.
"""

from __future__ import annotations

import contextvars
import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from itertools import pairwise
from typing import Any

import numpy as np
import structlog

from app.cli.run_config import RunConfig, config_hash
from app.cli.runner import solve_run
from app.core.config import settings
from app.schemas_report import SweepRow

_log = logging.getLogger(__name__)

FIRST_EPS = 0.25


class SweepError(ValueError):
    """Raised for an unknown sweep parameter or an empty value list."""

    pass


class SweepParameter(str, Enum):
    R_MAX = "r_max"
    NODES = "nodes"
    EPS_FLOOR = "eps_floor"
    XI1 = "xi1"


def parse_values(raw: str | Sequence[float]) -> list[float]:
    if isinstance(raw, str):
        try:
            values = [float(v) for v in raw.split(",") if v.strip()]
        except ValueError as e:
            raise SweepError(f"invalid sweep values {raw!r}") from e
    else:
        values = [float(v) for v in raw]
    if not values:
        raise SweepError("empty sweep value list")
    return values


def eps_floor_schedule(floor: float, steps: int) -> list[float]:
    """Geometric schedule from 1/4 down to ``floor`` (inclusive)."""
    if not 0.0 < floor <= FIRST_EPS:
        raise SweepError(f"eps floor must lie in ]0, {FIRST_EPS}], got {floor}")
    if floor == FIRST_EPS or steps < 2:
        return [floor]
    schedule = [float(e) for e in np.geomspace(FIRST_EPS, floor, steps)]
    schedule[-1] = floor
    return schedule


def variant(run: RunConfig, parameter: SweepParameter, value: float) -> RunConfig:
    """The run config with one parameter replaced, revalidated."""
    data: dict[str, Any] = run.model_dump(by_alias=True)
    match parameter:
        case SweepParameter.R_MAX:
            data["grid"]["r_max"] = value
        case SweepParameter.NODES:
            data["grid"]["nodes"] = int(value)
        case SweepParameter.EPS_FLOOR:
            data["solver"]["eps_schedule"] = eps_floor_schedule(value, run.solver.eps_steps)
        case SweepParameter.XI1:
            data["bounds"]["xi1"] = value
    return RunConfig(**data)


def sweep_point(run: RunConfig, parameter: SweepParameter, value: float) -> SweepRow:
    with structlog.contextvars.bound_contextvars(parameter=parameter.value, value=value):
        try:
            point = variant(run, parameter, value)
            outcome = solve_run(point, config_hash(point), sensitivity=False)
        except (ValueError, RuntimeError) as e:
            _log.warning("sweep_point_failed", extra={"error": str(e)})
            return SweepRow(
                parameter=parameter.value,
                value=value,
                converged=False,
                certified=False,
                error=str(e),
            )
        report = outcome.report
        last = report.stages[-1] if report.stages else None
        return SweepRow(
            parameter=parameter.value,
            value=value,
            converged=report.converged,
            certified=outcome.certified,
            u0=outcome.state.u.at_origin,
            v0=outcome.state.v.at_origin,
            residual_max=(
                max(last.residual_u_max, last.residual_v_max) if last is not None else None
            ),
            R_inf=report.bounds.R_inf,
            rho=report.bounds.rho,
            error=report.error,
        )


def run_sweep(
    run: RunConfig, parameter: str, values: str | Sequence[float], jobs: int = 1
) -> list[SweepRow]:
    """Solve once per value; r_max sweeps also report the relative change of u(0).

    Raises:
        SweepError: unknown parameter or empty values.
    """
    try:
        param = SweepParameter(parameter)
    except ValueError as e:
        raise SweepError(
            f"unknown sweep parameter {parameter!r}; "
            f"expected one of {[p.value for p in SweepParameter]}"
        ) from e
    points = parse_values(values)
    workers = max(1, min(jobs, settings.SWEEP_MAX_WORKERS, len(points)))
    _log.info(
        "sweep_started", extra={"parameter": param.value, "points": len(points), "workers": workers}
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(contextvars.copy_context().run, sweep_point, run, param, v)
            for v in points
        ]
        rows = [f.result() for f in futures]

    if param is SweepParameter.R_MAX:
        for prev, row in pairwise(rows):
            if prev.u0 is not None and row.u0 is not None and row.u0 != 0.0:
                row.u0_rel_change = abs(row.u0 - prev.u0) / abs(row.u0)
    return rows
