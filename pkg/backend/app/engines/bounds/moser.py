"""
Moser iteration: L^infinity bound from the L^{p*} bound.

With x_n = kappa_n + 1 the exponent recurrence (kappa_n p + 1) xi' =
(kappa_{n-1} + 1) p* is affine, x_n = r x_{n-1} + (1 - 1/p) with
r = p*/(p xi') > 1, so x_n >= x_k r^{n-k} and every tail of
sum 1/x_i or sum 1/sqrt(x_i) is bounded by a geometric series.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from app.core.config import settings
from app.engines.bounds.apriori import energy_gradient_bounds, lpstar_apriori
from app.engines.bounds.constants import CONVENTION_TALENTI, CONVENTION_UNIT
from app.engines.bounds.errors import BoundsError
from app.engines.hypotheses import ExponentConfig, derive_exponents
from app.engines.weights import WeightNorms
from app.schemas_report import BoundsReport, MoserTrace, SobolevConstants

_log = logging.getLogger(__name__)

DEFAULT_MAX_TERMS = 100_000


def _side_label(side: int) -> str:
    if side not in (1, 2):
        raise BoundsError(f"side must be 1 or 2, got {side}")
    return "u" if side == 1 else "v"


def kappa_sequence(
    cfg: ExponentConfig,
    xi: float,
    kappa0: float = 0.0,
    tol: float = 1e-8,
    *,
    side: int = 1,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> MoserTrace:
    """Generate kappa_0 < kappa_1 < ... until both series tails are below ``tol``.

    ``eta_sum`` and ``sqrt_sum`` are partial sums over i >= 1; ``tail_bound``
    bounds what is left of either series.

    Raises:
        BoundsError: xi outside ]p*/(p*-p), zeta[ (divergent regime), negative
            kappa0, nonpositive tol, or no convergence within ``max_terms``.
    """
    label = _side_label(side)
    if kappa0 < 0.0:
        raise BoundsError(f"kappa0 must be >= 0, got {kappa0}")
    if not tol > 0.0:
        raise BoundsError(f"tail tolerance must be positive, got {tol}")
    derived = derive_exponents(cfg)
    window = derived.xi_range(side)
    p = cfg.p1 if side == 1 else cfg.p2
    pstar = derived.pstar(side)
    if xi <= window.lower:
        raise BoundsError(
            f"xi{side}={xi} <= {window.lower:.6g}: recurrence ratio <= 1, divergent regime"
        )
    if xi >= window.upper:
        raise BoundsError(f"xi{side}={xi} >= zeta{side}={window.upper:.6g}")

    xi_conj = xi / (xi - 1.0)
    ratio = pstar / (p * xi_conj)
    sqrt_ratio = math.sqrt(ratio)

    def tail(x: float) -> float:
        return max(1.0 / (x * (ratio - 1.0)), 1.0 / (math.sqrt(x) * (sqrt_ratio - 1.0)))

    def cond_k_margin(kappa: float) -> float:
        return 1.0 - (kappa * p + 1.0) / ((kappa + 1.0) * pstar) - 1.0 / xi

    kappa = [float(kappa0)]
    eta_sum = sqrt_sum = 0.0
    margin = cond_k_margin(kappa0)
    while True:
        if len(kappa) > max_terms:
            raise BoundsError(f"kappa sequence did not reach tail {tol} in {max_terms} terms")
        nxt = ((kappa[-1] + 1.0) * pstar / xi_conj - 1.0) / p
        if not nxt > kappa[-1]:
            raise BoundsError(f"kappa sequence stalled at {kappa[-1]}")
        kappa.append(nxt)
        x = nxt + 1.0
        eta_sum += 1.0 / (x * p)
        sqrt_sum += 1.0 / math.sqrt(x)
        margin = min(margin, cond_k_margin(nxt))
        if tail(x) < tol:
            break
    if margin <= 0.0:
        raise BoundsError(f"exponent condition on kappa fails, margin {margin}")

    trace = MoserTrace(
        side=label,
        xi=xi,
        xi_conj=xi_conj,
        ratio=ratio,
        kappa=kappa,
        eta_sum=eta_sum,
        sqrt_sum=sqrt_sum,
        tail_bound=tail(kappa[-1] + 1.0),
        n_terms=len(kappa) - 1,
        cond_k_min_margin=margin,
        ratio_last=(kappa[-1] + 1.0) / (kappa[-2] + 1.0),
    )
    _log.debug(
        "kappa_sequence", extra={"side": label, "n_terms": trace.n_terms, "ratio": ratio}
    )
    return trace


# ---------------------------------------------------------------------------
# C4
# ---------------------------------------------------------------------------


def _log_sigma(t: float | np.ndarray, p: float) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return (np.log1p(t) - np.log1p(t * p) / p) / np.sqrt(1.0 + t)


@lru_cache(maxsize=64)
def _c4(p: float, t_max: float, points: int) -> tuple[float, float]:
    grid = np.concatenate(([0.0], np.geomspace(1e-6, t_max, points)))
    values = _log_sigma(grid, p)
    idx = int(np.argmax(values))
    lo, hi = grid[max(idx - 1, 0)], grid[min(idx + 1, grid.size - 1)]
    best_t, best = float(grid[idx]), float(values[idx])
    if hi > lo:
        res = minimize_scalar(
            lambda t: -float(_log_sigma(t, p)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        if -res.fun > best:
            best_t, best = float(res.x), float(-res.fun)
    return math.exp(best), best_t


def c4_constant(
    p: float, t_max: float | None = None, points: int | None = None
) -> tuple[float, float]:
    """sup_{t>=0} [(t+1)/(tp+1)^{1/p}]^{1/sqrt(t+1)} and its maximiser.

    The sup is taken on a log grid over [0, t_max] refined by a bounded scalar
    search; results are cached per (p, t_max, points).
    """
    if p <= 1.0:
        raise BoundsError(f"C4 needs p > 1, got {p}")
    return _c4(
        float(p),
        float(t_max if t_max is not None else settings.C4_T_MAX),
        int(points if points is not None else settings.C4_GRID_POINTS),
    )


# ---------------------------------------------------------------------------
# L^infinity bound
# ---------------------------------------------------------------------------


class MoserBound(NamedTuple):
    R_inf: float
    moser_u: MoserTrace
    moser_v: MoserTrace


def _side_constant(
    trace: MoserTrace, p: float, M: float, S: float, norms: WeightNorms, coupling: float
) -> MoserTrace:
    C3 = M * S**p * (norms.xi + norms.zeta)
    C4, argmax = c4_constant(p)
    eta_total = trace.eta_sum + trace.tail_bound / p
    sqrt_total = trace.sqrt_sum + trace.tail_bound
    # sup over n of the partial products, each factor >= C3 (1 + rho^beta)
    base = max(1.0, C3 * (1.0 + coupling))
    C5 = base**eta_total * C4**sqrt_total
    return trace.model_copy(update={"C3": C3, "C4": C4, "C4_argmax": argmax, "C5": C5})


def moser_linf_bound(
    cfg: ExponentConfig,
    trace_u: MoserTrace,
    trace_v: MoserTrace,
    rho: float,
    norms1: WeightNorms,
    norms2: WeightNorms,
    sobolev: SobolevConstants,
) -> MoserBound:
    """R = max{1, C5(u), C5(v)}.

    ``norms*.xi`` must be the weight norms at the ``xi`` of the matching trace.
    """
    if not rho > 0.0:
        raise BoundsError(f"rho must be positive, got {rho}")
    moser_u = _side_constant(trace_u, cfg.p1, cfg.M1, sobolev.S1, norms1, rho**cfg.beta1)
    moser_v = _side_constant(trace_v, cfg.p2, cfg.M2, sobolev.S2, norms2, rho**cfg.alpha2)
    R_inf = max(1.0, moser_u.C5 or 0.0, moser_v.C5 or 0.0)
    return MoserBound(R_inf=R_inf, moser_u=moser_u, moser_v=moser_v)


def compute_bounds(
    cfg: ExponentConfig,
    norms1: WeightNorms,
    norms2: WeightNorms,
    sobolev: SobolevConstants,
    *,
    xi1: float | None = None,
    xi2: float | None = None,
    kappa0: float = 0.0,
    tail_tol: float = 1e-8,
    convention: str = CONVENTION_TALENTI,
) -> BoundsReport:
    """Full constant ledger: rho, both Moser traces, R and the energy bounds."""
    if convention not in (CONVENTION_TALENTI, CONVENTION_UNIT):
        raise BoundsError(f"unknown constant convention {convention!r}")
    derived = derive_exponents(cfg)
    xi1 = xi1 if xi1 is not None else derived.xi_default(1)
    xi2 = xi2 if xi2 is not None else derived.xi_default(2)

    lpstar = lpstar_apriori(
        cfg, norms1, norms2, sobolev, unit_constants=convention == CONVENTION_UNIT
    )
    trace_u = kappa_sequence(cfg, xi1, kappa0, tail_tol, side=1)
    trace_v = kappa_sequence(cfg, xi2, kappa0, tail_tol, side=2)
    linf = moser_linf_bound(cfg, trace_u, trace_v, lpstar.rho, norms1, norms2, sobolev)
    energy = energy_gradient_bounds(cfg, linf.R_inf, norms1, norms2)

    _log.info(
        "bounds_computed",
        extra={
            "rho": lpstar.rho,
            "R_inf": linf.R_inf,
            "binding_case": lpstar.binding_case,
            "convention": convention,
        },
    )
    return BoundsReport(
        rho=lpstar.rho,
        R_inf=linf.R_inf,
        C1=lpstar.C1,
        C2=lpstar.C2,
        case_taken=lpstar.case_taken,
        moser=linf.moser_u,
        moser_v=linf.moser_v,
        lpstar=lpstar,
        sobolev=sobolev,
        energy=energy,
        constant_convention=convention,
    )
