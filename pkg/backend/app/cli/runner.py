"""Shared pipeline behind ``solve`` and every ``sweep`` point."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from app.cli.run_config import RunConfig
from app.engines.fixedpoint import (
    ContinuationError,
    EnvelopeSet,
    SolverContext,
    SolverState,
    build_context,
    certify,
    continuation,
    envelopes,
)
from app.engines.plap_radial import truncation_sensitivity
from app.schemas_report import SolveReport, StageReport

_log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SolveOutcome:
    ctx: SolverContext
    state: SolverState
    envelopes: EnvelopeSet
    report: SolveReport

    @property
    def certified(self) -> bool:
        return self.report.certification is not None and self.report.certification.passed


def context_for(run: RunConfig) -> SolverContext:
    return build_context(
        run.exponents,
        run.weight.a1,
        run.weight.a2,
        run.build_grid(),
        boundary=run.solver.boundary,
        n_tests=run.solver.test_functions,
        xi1=run.bounds.xi1,
        xi2=run.bounds.xi2,
        kappa0=run.bounds.kappa0,
        tail_tol=run.bounds.tail_tol,
        convention=run.bounds.convention,
    )


def solve_run(run: RunConfig, config_hash: str, *, sensitivity: bool = True) -> SolveOutcome:
    """Context, continuation, certification and truncation sensitivity for one config.

    A non-converged stage does not raise: the outcome carries the partial
    stages, ``converged=False`` and the error message.

    Raises:
        InadmissibleConfigError, BoundsError, WeightError, PLapError: propagated
            from :func:`build_context`.
    """
    ctx = context_for(run)
    solver = run.solver
    error: str | None = None
    stages: list[StageReport]
    try:
        result = continuation(
            solver.schedule(),
            solver.tol,
            ctx,
            theta=solver.theta,
            max_iter=solver.max_iter,
        )
        state, stages, converged = result.state, result.stages, True
    except ContinuationError as e:
        state, stages, converged, error = e.state, e.stages, False, str(e)
        _log.warning("continuation_aborted", extra={"error": error, "stages": len(stages)})

    certification = (
        certify(
            state,
            ctx,
            residual_tol=solver.residual_tol,
            truncation_tol=solver.truncation_tol,
        )
        if converged
        else None
    )
    sens = []
    if sensitivity:
        cfg = run.exponents
        for spec, p in ((run.weight.a1, cfg.p1), (run.weight.a2, cfg.p2)):
            sens.append(truncation_sensitivity(spec, p, ctx.grid, ctx.boundary))

    report = SolveReport(
        config_hash=config_hash,
        bounds=ctx.bounds,
        stages=stages,
        certification=certification,
        truncation_sensitivity=sens,
        converged=converged,
        error=error,
    )
    env = envelopes(ctx.cfg, ctx.w1, ctx.w2, ctx.R, state.eps)
    return SolveOutcome(ctx=ctx, state=state, envelopes=env, report=report)
