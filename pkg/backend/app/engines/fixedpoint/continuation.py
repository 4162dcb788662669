"""eps-continuation: warm-started Picard stages for a decreasing eps schedule."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from itertools import pairwise
from typing import NamedTuple

import numpy as np

from app.engines.bounds import schauder_gradient_bounds
from app.engines.fixedpoint.certify import singular_residuals
from app.engines.fixedpoint.context import SolverContext
from app.engines.fixedpoint.envelopes import envelopes
from app.engines.fixedpoint.picard import SolverState, picard_solve
from app.engines.radial_grid import RadialField, grad_seminorm
from app.schemas_report import StageReport

_log = logging.getLogger(__name__)

DUAL_START_TOL = 1e-6


class ScheduleError(ValueError):
    """Raised for an empty, non-decreasing, or out-of-range eps schedule."""

    pass


class ContinuationError(RuntimeError):
    """Raised when a stage does not converge; carries the stages run so far."""

    def __init__(self, message: str, stages: list[StageReport], state: SolverState) -> None:
        super().__init__(message)
        self.stages = stages
        self.state = state


class ContinuationResult(NamedTuple):
    state: SolverState
    stages: list[StageReport]


def default_schedule(steps: int = 6, start: float = 0.25) -> list[float]:
    """start / 2^k for k = 0 .. steps-1."""
    if steps < 1:
        raise ScheduleError(f"need at least one stage, got {steps}")
    if not 0.0 < start < 1.0:
        raise ScheduleError(f"first eps must lie in ]0, 1[, got {start}")
    return [start / 2.0**k for k in range(steps)]


def check_schedule(schedule: Sequence[float]) -> list[float]:
    eps = [float(e) for e in schedule]
    if not eps:
        raise ScheduleError("empty eps schedule")
    if any(not 0.0 < e < 1.0 for e in eps):
        raise ScheduleError(f"every eps must lie in ]0, 1[, got {eps}")
    if any(b >= a for a, b in pairwise(eps)):
        raise ScheduleError(f"eps schedule must be strictly decreasing, got {eps}")
    return eps


def _max_gap(a: tuple[RadialField, RadialField], b: tuple[RadialField, RadialField]) -> float:
    return max(
        float(np.max(np.abs(a[0].values - b[0].values))),
        float(np.max(np.abs(a[1].values - b[1].values))),
    )


def stage_report(
    index: int,
    state: SolverState,
    ctx: SolverContext,
    *,
    previous: SolverState | None = None,
    dual_start_gap: float | None = None,
) -> StageReport:
    cfg = ctx.cfg
    res_u, res_v = singular_residuals(state.u, state.v, state.eps, ctx)
    state.residuals = {"u": res_u, "v": res_v}
    bound_u, bound_v = schauder_gradient_bounds(
        cfg, ctx.R, state.eps, ctx.norms1, ctx.norms2, ctx.bounds.sobolev
    )
    return StageReport(
        index=index,
        eps=state.eps,
        converged=state.converged,
        iterations=state.iteration,
        final_moved=state.final_moved,
        theta=state.theta,
        clamp_events=state.clamp_events,
        max_bracket_violation=state.max_bracket_violation,
        residual_u_max=max(res_u, default=0.0),
        residual_v_max=max(res_v, default=0.0),
        u0=state.u.at_origin,
        v0=state.v.at_origin,
        grad_u=grad_seminorm(state.u, cfg.p1),
        grad_v=grad_seminorm(state.v, cfg.p2),
        schauder_grad_bound_u=bound_u,
        schauder_grad_bound_v=bound_v,
        distance_u_prev=(
            grad_seminorm(state.u - previous.u, cfg.p1) if previous is not None else None
        ),
        distance_v_prev=(
            grad_seminorm(state.v - previous.v, cfg.p2) if previous is not None else None
        ),
        dual_start_gap=dual_start_gap,
        history=list(state.history),
    )


def continuation(
    schedule: Sequence[float],
    tol: float,
    ctx: SolverContext,
    *,
    theta: float = 1.0,
    max_iter: int = 200,
    dual_start: bool = True,
) -> ContinuationResult:
    """Run one Picard stage per eps, each warm-started from the previous solution.

    For the first stage the iteration is repeated from the upper barriers and
    the max-norm gap between the two fixed points is reported; a gap above
    1e-6 is logged, not failed.

    Raises:
        ScheduleError: invalid schedule.
        ContinuationError: a stage did not converge (partial stages attached).
    """
    eps_values = check_schedule(schedule)
    stages: list[StageReport] = []
    previous: SolverState | None = None
    for index, eps in enumerate(eps_values):
        start = (previous.u, previous.v) if previous is not None else None
        state = picard_solve(eps, theta, tol, max_iter, ctx, start=start)

        gap = None
        if dual_start and previous is None and state.converged:
            env = envelopes(ctx.cfg, ctx.w1, ctx.w2, ctx.R, eps)
            upper = picard_solve(eps, theta, tol, max_iter, ctx, start=(env.u_hi, env.v_hi))
            gap = _max_gap((state.u, state.v), (upper.u, upper.v))
            if not upper.converged or gap > DUAL_START_TOL:
                _log.warning(
                    "dual_start_diverged",
                    extra={"eps": eps, "gap": gap, "upper_converged": upper.converged},
                )

        report = stage_report(index, state, ctx, previous=previous, dual_start_gap=gap)
        stages.append(report)
        if not state.converged:
            raise ContinuationError(
                f"stage {index} (eps={eps}) did not converge in {state.iteration} iterations",
                stages=stages,
                state=state,
            )
        _log.info(
            "stage_completed",
            extra={
                "stage": index,
                "eps": eps,
                "iterations": state.iteration,
                "u0": report.u0,
                "v0": report.v0,
            },
        )
        previous = state
    return ContinuationResult(state=state, stages=stages)
