"""
Exponent hypotheses of the singular system.

Holds the exponent/structural-constant configuration, the derived
integrability exponents (critical Sobolev exponents, gamma_i, delta_i, the xi_i
windows) and the admissibility report. Everything here is a pure function of
an immutable config.
"""

from __future__ import annotations

import logging
import math

from pydantic import BaseModel, ConfigDict, computed_field

from app.core.param_type import Real
from app.schemas_report import CheckResult, ValidationReport

_log = logging.getLogger(__name__)


class HypothesisError(ValueError):
    """Raised when derived exponents cannot be formed (1 < p_i < N violated)."""

    pass


class ExponentConfig(BaseModel):
    """Exponents and structural constants of the system.

    Only types are enforced here; the growth and integrability conditions are
    reported by :func:`validate` so that borderline configs stay inspectable.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    N: int
    p1: Real
    p2: Real
    alpha1: Real
    alpha2: Real
    beta1: Real
    beta2: Real
    m1: Real = 1.0
    M1: Real = 1.0
    m2: Real = 1.0
    M2: Real = 1.0
    zeta1: Real
    zeta2: Real


class OpenInterval(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    lower: float
    upper: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def empty(self) -> bool:
        return not self.lower < self.upper

    def contains(self, x: float) -> bool:
        return self.lower < x < self.upper

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


class DerivedExponents(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    p1_star: float
    p2_star: float
    t1: float
    t2: float
    s1: float
    s2: float
    gamma1: float
    gamma2: float
    delta1: float
    delta2: float
    xi1_range: OpenInterval
    xi2_range: OpenInterval
    zeta1_min: float
    zeta2_min: float
    p1_star_dual: float
    p2_star_dual: float

    def pstar(self, side: int) -> float:
        return self.p1_star if side == 1 else self.p2_star

    def xi_range(self, side: int) -> OpenInterval:
        return self.xi1_range if side == 1 else self.xi2_range

    def xi_default(self, side: int) -> float:
        return self.xi_range(side).midpoint


def critical_exponent(N: int, p: float) -> float:
    if not 1.0 < p < N:
        raise HypothesisError(f"p must satisfy 1 < p < N={N}, got p={p}")
    return N * p / (N - p)


def _inverse_gap(t: float) -> float:
    # 1/(1 - t); infinite once t >= 1 (the exponent no longer exists)
    return 1.0 / (1.0 - t) if t < 1.0 else math.inf


def derive_exponents(cfg: ExponentConfig) -> DerivedExponents:
    """Closed-form derived exponents.

    Raises:
        HypothesisError: if 1 < p_i < N fails for either component.
    """
    p1s = critical_exponent(cfg.N, cfg.p1)
    p2s = critical_exponent(cfg.N, cfg.p2)

    t1 = (cfg.alpha1 + 1.0) / p1s + cfg.beta1 / p2s
    t2 = cfg.alpha2 / p1s + (cfg.beta2 + 1.0) / p2s
    s1 = (cfg.alpha1 + 1.0) / p1s
    s2 = (cfg.beta2 + 1.0) / p2s

    return DerivedExponents(
        p1_star=p1s,
        p2_star=p2s,
        t1=t1,
        t2=t2,
        s1=s1,
        s2=s2,
        gamma1=_inverse_gap(t1),
        gamma2=_inverse_gap(t2),
        delta1=_inverse_gap(s1),
        delta2=_inverse_gap(s2),
        xi1_range=OpenInterval(lower=p1s / (p1s - cfg.p1), upper=cfg.zeta1),
        xi2_range=OpenInterval(lower=p2s / (p2s - cfg.p2), upper=cfg.zeta2),
        zeta1_min=_inverse_gap(cfg.p1 / p1s + cfg.beta1 / p2s),
        zeta2_min=_inverse_gap(cfg.p2 / p2s + cfg.alpha2 / p1s),
        p1_star_dual=p1s / (p1s - 1.0),
        p2_star_dual=p2s / (p2s - 1.0),
    )


# ---------------------------------------------------------------------------
# Admissibility report
# ---------------------------------------------------------------------------


def _reciprocal(x: float) -> float:
    return 1.0 / x if x > 0.0 else math.inf


def _strict(name: str, lhs: float, rhs: float) -> CheckResult:
    margin = rhs - lhs
    return CheckResult(name=name, satisfied=margin > 0.0, margin=margin)


def _weak(name: str, lhs: float, rhs: float) -> CheckResult:
    margin = rhs - lhs
    return CheckResult(name=name, satisfied=margin >= 0.0, margin=margin)


def _undefined(name: str) -> CheckResult:
    return CheckResult(
        name=name, satisfied=False, margin=None, detail="critical exponent undefined"
    )


def validate(cfg: ExponentConfig) -> ValidationReport:
    """One entry per inequality of the growth, coupling and weight conditions.

    Strict inequalities pass on a positive margin, the ``<=`` conditions on the
    structural constants and on zeta_i pass on a nonnegative one.
    """
    checks = [
        _weak("N>=3", 3.0, float(cfg.N)),
        _strict("1<p1", 1.0, cfg.p1),
        _strict("p1<N", cfg.p1, float(cfg.N)),
        _strict("1<p2", 1.0, cfg.p2),
        _strict("p2<N", cfg.p2, float(cfg.N)),
        _strict("-1<alpha1", -1.0, cfg.alpha1),
        _strict("alpha1<0", cfg.alpha1, 0.0),
        _strict("-1<beta2", -1.0, cfg.beta2),
        _strict("beta2<0", cfg.beta2, 0.0),
        _strict("alpha2>0", 0.0, cfg.alpha2),
        _strict("beta1>0", 0.0, cfg.beta1),
        _strict("0<m1", 0.0, cfg.m1),
        _weak("m1<=M1", cfg.m1, cfg.M1),
        _strict("0<m2", 0.0, cfg.m2),
        _weak("m2<=M2", cfg.m2, cfg.M2),
        _strict("alpha1+alpha2<p1-1", cfg.alpha1 + cfg.alpha2, cfg.p1 - 1.0),
        _strict("beta1+beta2<p2-1", cfg.beta1 + cfg.beta2, cfg.p2 - 1.0),
        _strict("zeta1>1", 1.0, cfg.zeta1),
        _strict("zeta2>1", 1.0, cfg.zeta2),
    ]

    p_names = (
        "beta1<(p2*/p1*)min{p1-1,p1*-p1}",
        "alpha2<(p1*/p2*)min{p2-1,p2*-p2}",
        "1/zeta1<=1-p1/p1*-beta1/p2*",
        "1/zeta2<=1-p2/p2*-alpha2/p1*",
    )
    if 1.0 < cfg.p1 < cfg.N and 1.0 < cfg.p2 < cfg.N:
        p1s = critical_exponent(cfg.N, cfg.p1)
        p2s = critical_exponent(cfg.N, cfg.p2)
        checks += [
            _strict(p_names[0], cfg.beta1, p2s / p1s * min(cfg.p1 - 1.0, p1s - cfg.p1)),
            _strict(p_names[1], cfg.alpha2, p1s / p2s * min(cfg.p2 - 1.0, p2s - cfg.p2)),
            _weak(p_names[2], _reciprocal(cfg.zeta1), 1.0 - cfg.p1 / p1s - cfg.beta1 / p2s),
            _weak(p_names[3], _reciprocal(cfg.zeta2), 1.0 - cfg.p2 / p2s - cfg.alpha2 / p1s),
        ]
    else:
        checks += [_undefined(name) for name in p_names]

    report = ValidationReport(checks=checks)
    if not report.overall:
        _log.debug("exponents_inadmissible", extra={"failed": report.failed()})
    return report


class InadmissibleConfigError(ValueError):
    """Raised when a config fails its admissibility report; carries the report."""

    def __init__(self, report: ValidationReport, what: str = "exponents") -> None:
        self.report = report
        super().__init__(f"inadmissible {what}: failed {', '.join(report.failed())}")


def require_admissible(cfg: ExponentConfig) -> ValidationReport:
    report = validate(cfg)
    if not report.overall:
        raise InadmissibleConfigError(report)
    return report
