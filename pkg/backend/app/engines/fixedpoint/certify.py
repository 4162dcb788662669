"""Diagnostics a computed solution pair must pass."""

from __future__ import annotations

import logging

import numpy as np

from app.engines.fixedpoint.context import SolverContext
from app.engines.fixedpoint.envelopes import EnvelopeSet, envelopes
from app.engines.fixedpoint.picard import SolverState
from app.engines.hypotheses import ExponentConfig, critical_exponent
from app.engines.plap_radial import TestFunctionSet, phi_p, weak_residual
from app.engines.radial_grid import FloatArray, RadialField, grad_seminorm, gradient, lq_norm
from app.schemas_report import (
    BracketingReport,
    CertificationReport,
    CheckResult,
    TruncationReport,
)

_log = logging.getLogger(__name__)

BRACKETING_TOL = 1e-12


def bracketing_check(
    state: SolverState, env: EnvelopeSet, *, R: float | None = None, tol: float = BRACKETING_TOL
) -> BracketingReport:
    """Largest violation of u_lo <= u <= u_hi, v_lo <= v <= v_hi (and u, v <= R if given)."""
    violations = env.violations(state.u, state.v)
    if R is not None:
        violations["u<=R"] = max(0.0, state.u.max() - R)
        violations["v<=R"] = max(0.0, state.v.max() - R)
    worst = max(violations.values())
    return BracketingReport(
        violations=violations, max_violation=worst, tol=tol, passed=worst <= tol
    )


def singular_residuals(
    u: RadialField, v: RadialField, eps: float, ctx: SolverContext
) -> tuple[list[float], list[float]]:
    """Weak residuals of -Delta_p u = a1 f(u + eps, v), -Delta_p v = a2 g(u, v + eps)."""
    rhs_u = ctx.a1 * u.with_values(ctx.f(u.values + eps, v.values))
    rhs_v = ctx.a2 * v.with_values(ctx.g(u.values, v.values + eps))
    return (
        weak_residual(u, rhs_u, ctx.cfg.p1, ctx.tests),
        weak_residual(v, rhs_v, ctx.cfg.p2, ctx.tests),
    )


def _superlevel_sides(
    z: RadialField, weight: FloatArray, p: float, tests: TestFunctionSet
) -> tuple[FloatArray, FloatArray]:
    grid = z.grid
    nodes_in = z.values > 1.0
    cells_in = nodes_in[:-1] & nodes_in[1:]
    flux = np.where(cells_in, grid.cell_weights * phi_p(gradient(z), p), 0.0)
    phis = tests.matrix()
    lhs = (np.diff(phis, axis=1) / grid.cell_width) @ flux
    rhs = phis @ np.where(nodes_in, grid.dual_volumes * weight, 0.0)
    return lhs, rhs


def truncated_inequality_check(
    u: RadialField,
    v: RadialField,
    cfg: ExponentConfig,
    a1: RadialField,
    a2: RadialField,
    tests: TestFunctionSet,
    tol: float = 1e-6,
) -> TruncationReport:
    """Flux of u tested over {u > 1} against M1 int_{u>1} a1 (1 + v^beta1) phi; v mirrored.

    Passes iff lhs <= rhs + tol max(1, rhs) for every test function and both sides.
    """
    lhs_u, rhs_u = _superlevel_sides(
        u, cfg.M1 * a1.values * (1.0 + v.values**cfg.beta1), cfg.p1, tests
    )
    lhs_v, rhs_v = _superlevel_sides(
        v, cfg.M2 * a2.values * (1.0 + u.values**cfg.alpha2), cfg.p2, tests
    )
    excess = np.concatenate(
        (lhs_u - rhs_u - tol * np.maximum(1.0, rhs_u), lhs_v - rhs_v - tol * np.maximum(1.0, rhs_v))
    )
    max_excess = float(np.max(np.concatenate((lhs_u - rhs_u, lhs_v - rhs_v))))
    return TruncationReport(
        lhs_u=lhs_u.tolist(),
        rhs_u=rhs_u.tolist(),
        lhs_v=lhs_v.tolist(),
        rhs_v=rhs_v.tolist(),
        max_excess=max_excess,
        tol=tol,
        passed=bool(np.all(excess <= 0.0)),
        omega1_sup_u=u.max() if u.max() > 1.0 else None,
        omega1_sup_v=v.max() if v.max() > 1.0 else None,
    )


def _upper(name: str, value: float, bound: float) -> CheckResult:
    return CheckResult(name=name, satisfied=value <= bound, margin=bound - value)


def certify(
    state: SolverState,
    ctx: SolverContext,
    *,
    residual_tol: float = 1e-6,
    truncation_tol: float = 1e-6,
) -> CertificationReport:
    """Bracketing, sup and L^{p*} bounds, singular residuals, truncated inequality, energy."""
    cfg, bounds = ctx.cfg, ctx.bounds
    env = envelopes(cfg, ctx.w1, ctx.w2, ctx.R, state.eps)
    res_u, res_v = singular_residuals(state.u, state.v, state.eps, ctx)
    state.residuals = {"u": res_u, "v": res_v}
    interior_min = min(float(np.min(state.u.values[:-1])), float(np.min(state.v.values[:-1])))

    checks = [
        _upper("max|u|<=R", state.u.max(), bounds.R_inf),
        _upper("max|v|<=R", state.v.max(), bounds.R_inf),
        _upper("||u||_{p1*}<=rho", lq_norm(state.u, critical_exponent(cfg.N, cfg.p1)), bounds.rho),
        _upper("||v||_{p2*}<=rho", lq_norm(state.v, critical_exponent(cfg.N, cfg.p2)), bounds.rho),
        _upper("residual_u<=tol", max(res_u, default=0.0), residual_tol),
        _upper("residual_v<=tol", max(res_v, default=0.0), residual_tol),
        _upper("||grad u||_{p1}<=energy", grad_seminorm(state.u, cfg.p1), bounds.energy.grad_u),
        _upper("||grad v||_{p2}<=energy", grad_seminorm(state.v, cfg.p2), bounds.energy.grad_v),
        CheckResult(name="u,v>0 inside", satisfied=interior_min > 0.0, margin=interior_min),
    ]
    report = CertificationReport(
        bracketing=bracketing_check(state, env, R=ctx.R),
        truncation=truncated_inequality_check(
            state.u, state.v, cfg, ctx.a1, ctx.a2, ctx.tests, truncation_tol
        ),
        checks=checks,
    )
    if report.passed:
        _log.info("certification_passed", extra={"eps": state.eps})
    else:
        failed = [c.name for c in checks if not c.satisfied]
        if not report.bracketing.passed:
            failed.append("bracketing")
        if not report.truncation.passed:
            failed.append("truncation")
        _log.warning("certification_failed", extra={"eps": state.eps, "failed": failed})
    return report
