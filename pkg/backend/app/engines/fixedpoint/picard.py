"""
Schauder map and damped Picard iteration inside the envelope box.

T(z1, z2) freezes the truncated, eps-shifted pair in the reaction terms and
solves the two decoupled radial p-Laplace problems. Iterates
z <- (1 - theta) z + theta T(z) start from the lower barriers.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from app.engines.fixedpoint.context import SolverContext
from app.engines.fixedpoint.envelopes import EnvelopeError, EnvelopeSet, envelopes, truncate
from app.engines.hypotheses import critical_exponent
from app.engines.plap_radial import PLapProblem, solve
from app.engines.radial_grid import RadialField, lq_norm
from app.schemas_report import HistoryEntry

_log = logging.getLogger(__name__)

# relative slack for the exact two-sided rhs bounds (pow round-off only)
RHS_BOUND_RTOL = 1e-13
ENVELOPE_TOL = 1e-12
THETA_MIN = 2.0**-10


class PicardError(ValueError):
    """Raised for invalid iteration parameters or a broken rhs bound."""

    pass


@dataclass
class SolverState:
    u: RadialField
    v: RadialField
    eps: float
    theta: float
    iteration: int = 0
    converged: bool = False
    final_moved: float = math.inf
    clamp_events: int = 0
    max_bracket_violation: float = 0.0
    history: list[HistoryEntry] = field(default_factory=list)
    residuals: dict[str, list[float]] = field(default_factory=dict)


def frozen_rhs(
    z1: RadialField, z2: RadialField, eps: float, ctx: SolverContext
) -> tuple[RadialField, RadialField]:
    """a1 f(z~1 + eps, z~2) and a2 g(z~1, z~2 + eps), checked against their bounds."""
    cfg, R = ctx.cfg, ctx.R
    t1, t2 = truncate(z1, R), truncate(z2, R)
    rhs1 = ctx.a1 * t1.with_values(ctx.f(t1.values + eps, t2.values))
    rhs2 = ctx.a2 * t2.with_values(ctx.g(t1.values, t2.values + eps))

    bounds = (
        (
            "rhs_u",
            rhs1,
            ctx.a1 * (cfg.m1 * (R + 1.0) ** cfg.alpha1),
            ctx.a1 * (cfg.M1 * eps**cfg.alpha1 * (1.0 + R**cfg.beta1)),
        ),
        (
            "rhs_v",
            rhs2,
            ctx.a2 * (cfg.m2 * (R + 1.0) ** cfg.beta2),
            ctx.a2 * (cfg.M2 * (1.0 + R**cfg.alpha2) * eps**cfg.beta2),
        ),
    )
    for name, rhs, lower, upper in bounds:
        if np.any(rhs.values < lower.values * (1.0 - RHS_BOUND_RTOL)) or np.any(
            rhs.values > upper.values * (1.0 + RHS_BOUND_RTOL)
        ):
            raise PicardError(f"{name} leaves its two-sided bound at eps={eps}")
    return rhs1, rhs2


def schauder_map(
    z1: RadialField,
    z2: RadialField,
    eps: float,
    ctx: SolverContext,
    env: EnvelopeSet | None = None,
) -> tuple[RadialField, RadialField]:
    """One application of T on a pair from the envelope box.

    Raises:
        EnvelopeError: an input leaves the box by more than round-off.
    """
    env = env if env is not None else envelopes(ctx.cfg, ctx.w1, ctx.w2, ctx.R, eps)
    if env.eps != eps:
        raise EnvelopeError(f"envelopes built for eps={env.eps}, map called with {eps}")
    if not env.contains(z1, z2, ENVELOPE_TOL):
        raise EnvelopeError(f"input outside the envelope box: {env.violations(z1, z2)}")
    rhs1, rhs2 = frozen_rhs(z1, z2, eps, ctx)
    u = solve(PLapProblem(p=ctx.cfg.p1, grid=ctx.grid, rhs=rhs1), ctx.boundary)
    v = solve(PLapProblem(p=ctx.cfg.p2, grid=ctx.grid, rhs=rhs2), ctx.boundary)
    return u, v


def lpstar_distance(
    u: RadialField, v: RadialField, u_prev: RadialField, v_prev: RadialField, ctx: SolverContext
) -> float:
    """max(||u - u'||_{p1*}, ||v - v'||_{p2*})."""
    cfg = ctx.cfg
    return max(
        lq_norm(u - u_prev, critical_exponent(cfg.N, cfg.p1)),
        lq_norm(v - v_prev, critical_exponent(cfg.N, cfg.p2)),
    )


def picard_solve(
    eps: float,
    theta: float,
    tol: float,
    max_iter: int,
    ctx: SolverContext,
    *,
    start: tuple[RadialField, RadialField] | None = None,
) -> SolverState:
    """Damped Picard iteration for the regularized system at ``eps``.

    theta is halved (down to 2^-10) after two consecutive increases of the
    distance moved. Non-convergence within ``max_iter`` is returned as a state
    with ``converged=False``, not raised.

    Raises:
        PicardError: theta outside ]0, 1], nonpositive tol or max_iter.
    """
    if not 0.0 < theta <= 1.0:
        raise PicardError(f"theta must lie in ]0, 1], got {theta}")
    if not tol > 0.0:
        raise PicardError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise PicardError(f"max_iter must be >= 1, got {max_iter}")

    env = envelopes(ctx.cfg, ctx.w1, ctx.w2, ctx.R, eps)
    u, v = start if start is not None else (env.u_lo, env.v_lo)
    state = SolverState(u=u, v=v, eps=eps, theta=theta)
    state.max_bracket_violation = env.max_violation(u, v)
    state.u, state.v, moved_nodes = env.clamp(u, v)
    if moved_nodes:
        state.clamp_events += 1

    prev_moved = math.inf
    increases = 0
    for it in range(1, max_iter + 1):
        tu, tv = schauder_map(state.u, state.v, eps, ctx, env)
        if state.theta < 1.0:
            nu = state.u * (1.0 - state.theta) + tu * state.theta
            nv = state.v * (1.0 - state.theta) + tv * state.theta
        else:
            nu, nv = tu, tv
        moved = lpstar_distance(nu, nv, state.u, state.v, ctx)

        state.max_bracket_violation = max(state.max_bracket_violation, env.max_violation(nu, nv))
        nu, nv, moved_nodes = env.clamp(nu, nv)
        if moved_nodes:
            state.clamp_events += 1
            _log.debug("iterate_clamped", extra={"iteration": it, "nodes": moved_nodes})

        state.u, state.v, state.iteration, state.final_moved = nu, nv, it, moved
        state.history.append(
            HistoryEntry(
                iteration=it, moved=moved, max_norm=max(nu.max(), nv.max()), theta=state.theta
            )
        )
        if moved < tol:
            state.converged = True
            break

        increases = increases + 1 if moved > prev_moved else 0
        if increases >= 2 and state.theta > THETA_MIN:
            state.theta = max(THETA_MIN, state.theta / 2.0)
            increases = 0
            _log.info("theta_halved", extra={"eps": eps, "iteration": it, "theta": state.theta})
        prev_moved = moved

    if state.converged:
        _log.info(
            "picard_converged",
            extra={"eps": eps, "iterations": state.iteration, "moved": state.final_moved},
        )
    else:
        _log.warning(
            "picard_not_converged",
            extra={"eps": eps, "iterations": state.iteration, "moved": state.final_moved},
        )
    return state
