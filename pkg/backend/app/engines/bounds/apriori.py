"""
L^{p*} a priori bound and the gradient bounds derived from it.

The four cases split on whether ||grad u||_{p1} and ||grad v||_{p2} are below
or above 1. Each case gives an explicit bound for both gradients; since any
case may bind for an unknown solution, rho is taken over all of them.
"""

from __future__ import annotations

import logging

from app.engines.bounds.errors import BoundsError
from app.engines.hypotheses import ExponentConfig
from app.engines.weights import WeightNorms
from app.schemas_report import BoundCase, EnergyBounds, LpStarBound, SobolevConstants

_log = logging.getLogger(__name__)


def working_constants(
    cfg: ExponentConfig, sobolev: SobolevConstants, *, unit: bool = False
) -> tuple[float, float]:
    """C1 = M1 S1^{alpha1+1} max(1, S2^{beta1}) and its mirror C2."""
    if unit:
        return 1.0, 1.0
    S1, S2 = sobolev.S1, sobolev.S2
    C1 = cfg.M1 * S1 ** (cfg.alpha1 + 1.0) * max(1.0, S2**cfg.beta1)
    C2 = cfg.M2 * S2 ** (cfg.beta2 + 1.0) * max(1.0, S1**cfg.alpha2)
    return C1, C2


def lpstar_apriori(
    cfg: ExponentConfig,
    norms1: WeightNorms,
    norms2: WeightNorms,
    sobolev: SobolevConstants,
    *,
    unit_constants: bool = False,
) -> LpStarBound:
    """Bound max{||u||_{p1*}, ||v||_{p2*}} <= rho for every solution.

    Raises:
        BoundsError: p1 - 1 - alpha1 - alpha2 <= 0 or p2 - 1 - beta1 - beta2 <= 0.
    """
    e1 = cfg.p1 - 1.0 - cfg.alpha1 - cfg.alpha2
    e2 = cfg.p2 - 1.0 - cfg.beta1 - cfg.beta2
    if e1 <= 0.0 or e2 <= 0.0:
        raise BoundsError(f"growth exponents must be positive, got e1={e1}, e2={e2}")
    C1, C2 = working_constants(cfg, sobolev, unit=unit_constants)

    D = C1 * norms1.delta + C2 * norms2.delta
    g1 = C1 * norms1.gamma
    g2 = C2 * norms2.gamma

    u_small = g2 ** (1.0 / e1)
    v_small = g1 ** (1.0 / e2)
    u_large = (D / g2 ** (cfg.alpha2 / e1) + g2) ** (1.0 / e1)
    v_large = (D / g1 ** (cfg.beta1 / e2) + g1) ** (1.0 / e2)
    v_mixed = (C2 * (norms2.delta + norms2.gamma * g2 ** (cfg.alpha2 / e1))) ** (
        1.0 / (cfg.p2 - 1.0 - cfg.beta2)
    )
    u_mixed = (C1 * (norms1.delta + norms1.gamma * g1 ** (cfg.beta1 / e2))) ** (
        1.0 / (cfg.p1 - 1.0 - cfg.alpha1)
    )

    cases = [
        BoundCase(name="both_small", grad_u=u_small, grad_v=v_small),
        BoundCase(name="both_large", grad_u=u_large, grad_v=v_large),
        BoundCase(name="u_small_v_large", grad_u=u_small, grad_v=v_mixed),
        BoundCase(name="u_large_v_small", grad_u=u_mixed, grad_v=v_small),
    ]
    S1, S2 = sobolev.S1, sobolev.S2
    binding = max(cases, key=lambda c: max(S1 * c.grad_u, S2 * c.grad_v))
    grad_u_max = max(c.grad_u for c in cases)
    grad_v_max = max(c.grad_v for c in cases)
    rho = max(S1 * grad_u_max, S2 * grad_v_max)
    _log.debug(
        "lpstar_bound", extra={"rho": rho, "binding_case": binding.name, "C1": C1, "C2": C2}
    )
    return LpStarBound(
        rho=rho,
        C1=C1,
        C2=C2,
        e1=e1,
        e2=e2,
        cases=cases,
        grad_u_max=grad_u_max,
        grad_v_max=grad_v_max,
        binding_case=binding.name,
    )


def energy_gradient_bounds(
    cfg: ExponentConfig, R: float, norms1: WeightNorms, norms2: WeightNorms
) -> EnergyBounds:
    """Gradient bounds of a solution pair bounded by R in sup norm.

    ||grad u||^{p1} <= M1 R^{alpha1+1} (1 + R^{beta1}) ||a1||_1 and the mirror
    for v.
    """
    if R < 1.0:
        raise BoundsError(f"R must be >= 1, got {R}")
    grad_u = (cfg.M1 * R ** (cfg.alpha1 + 1.0) * (1.0 + R**cfg.beta1) * norms1.l1) ** (
        1.0 / cfg.p1
    )
    grad_v = (cfg.M2 * (1.0 + R**cfg.alpha2) * R ** (cfg.beta2 + 1.0) * norms2.l1) ** (
        1.0 / cfg.p2
    )
    return EnergyBounds(grad_u=grad_u, grad_v=grad_v)


def schauder_gradient_bounds(
    cfg: ExponentConfig,
    R: float,
    eps: float,
    norms1: WeightNorms,
    norms2: WeightNorms,
    sobolev: SobolevConstants,
) -> tuple[float, float]:
    """Gradient bounds of the Schauder image at regularization ``eps``.

    ||grad u||^{p1-1} <= C_eps S1 ||a1||_{(p1*)'} with
    C_eps = M1 eps^{alpha1} (1 + R^{beta1}); v mirrored.
    """
    if not 0.0 < eps <= 1.0:
        raise BoundsError(f"eps must lie in ]0, 1], got {eps}")
    c_u = cfg.M1 * eps**cfg.alpha1 * (1.0 + R**cfg.beta1)
    c_v = cfg.M2 * (1.0 + R**cfg.alpha2) * eps**cfg.beta2
    bound_u = (c_u * sobolev.S1 * norms1.pstar_dual) ** (1.0 / (cfg.p1 - 1.0))
    bound_v = (c_v * sobolev.S2 * norms2.pstar_dual) ** (1.0 / (cfg.p2 - 1.0))
    return bound_u, bound_v
