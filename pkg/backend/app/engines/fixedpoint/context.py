"""Immutable inputs shared by every Picard stage of one run."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from app.engines.bounds import CONVENTION_TALENTI, compute_bounds, sobolev_constants
from app.engines.fixedpoint.nonlinearity import Nonlinearity
from app.engines.hypotheses import (
    ExponentConfig,
    HypothesisError,
    InadmissibleConfigError,
    derive_exponents,
    require_admissible,
)
from app.engines.plap_radial import BoundaryClosure, TestFunctionSet, torsion
from app.engines.radial_grid import RadialField, RadialGrid
from app.engines.weights import WeightNorms, WeightSpec, check_Ha, sample, weight_norms
from app.schemas_report import BoundsReport

_log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SolverContext:
    cfg: ExponentConfig
    grid: RadialGrid
    a1: RadialField
    a2: RadialField
    w1: RadialField
    w2: RadialField
    norms1: WeightNorms
    norms2: WeightNorms
    bounds: BoundsReport
    tests: TestFunctionSet
    boundary: BoundaryClosure
    f: Nonlinearity
    g: Nonlinearity

    @property
    def R(self) -> float:
        return self.bounds.R_inf


def build_context(
    cfg: ExponentConfig,
    spec1: WeightSpec,
    spec2: WeightSpec,
    grid: RadialGrid,
    *,
    boundary: BoundaryClosure = BoundaryClosure.DIRICHLET,
    n_tests: int = 20,
    xi1: float | None = None,
    xi2: float | None = None,
    kappa0: float = 0.0,
    tail_tol: float = 1e-8,
    convention: str = CONVENTION_TALENTI,
) -> SolverContext:
    """Validate, bound, and precompute everything a run needs.

    Raises:
        InadmissibleConfigError: exponent or weight checks fail.
        BoundsError, PLapError, WeightError: propagated.
    """
    if grid.N != cfg.N:
        raise HypothesisError(f"grid dimension {grid.N} differs from N={cfg.N}")
    require_admissible(cfg)
    derived = derive_exponents(cfg)
    xi1 = xi1 if xi1 is not None else derived.xi_default(1)
    xi2 = xi2 if xi2 is not None else derived.xi_default(2)

    reports = []
    for side, spec, xi in ((1, spec1, xi1), (2, spec2, xi2)):
        report = check_Ha(spec, cfg, grid, side=side, xi=xi)
        if not report.overall:
            raise InadmissibleConfigError(report, what=f"weight a{side}")
        reports.append(report)
    norms1, norms2 = (weight_norms(r) for r in reports)

    bounds = compute_bounds(
        cfg,
        norms1,
        norms2,
        sobolev_constants(cfg),
        xi1=xi1,
        xi2=xi2,
        kappa0=kappa0,
        tail_tol=tail_tol,
        convention=convention,
    )
    ctx = SolverContext(
        cfg=cfg,
        grid=grid,
        a1=sample(spec1, grid),
        a2=sample(spec2, grid),
        w1=torsion(spec1, cfg.p1, grid, boundary),
        w2=torsion(spec2, cfg.p2, grid, boundary),
        norms1=norms1,
        norms2=norms2,
        bounds=bounds,
        tests=TestFunctionSet.polynomial_bumps(grid, n_tests),
        boundary=BoundaryClosure(boundary),
        f=Nonlinearity.model_f(cfg),
        g=Nonlinearity.model_g(cfg),
    )
    _log.info(
        "context_built",
        extra={
            "nodes": grid.n_nodes,
            "R_max": grid.R_max,
            "R_inf": bounds.R_inf,
            "rho": bounds.rho,
            "boundary": ctx.boundary.value,
        },
    )
    return ctx
