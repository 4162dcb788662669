"""
Radial coefficient families a_i and their Lebesgue norms.

Three closed-form families are supported so that every norm used by the a
priori bounds has an analytic value next to the quadrature value:

- gaussian:   a(r) = A exp(-lambda r^2)
- bump:       a(r) = A (1 - (r/rho0)^2)_+^k
- powerdecay: a(r) = A (1 + r)^(-sigma)
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import NamedTuple, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy.special import beta as beta_fn
from scipy.special import betainc, gammaincc

from app.core.param_type import Real
from app.engines.hypotheses import ExponentConfig, derive_exponents
from app.engines.radial_grid import (
    FloatArray,
    RadialField,
    RadialGrid,
    integrate,
    lq_norm,
    sphere_area,
    superlevel_measure,
)
from app.schemas_report import CheckResult, NormEntry, ValidationReport

_log = logging.getLogger(__name__)


class WeightError(ValueError):
    """Raised for invalid weight parameters or nonpositive samples."""

    pass


class WeightFamily(str, Enum):
    GAUSSIAN = "gaussian"
    BUMP = "bump"
    POWERDECAY = "powerdecay"


class WeightSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    family: WeightFamily
    A: Real = 1.0
    lam: Real = Field(default=1.0, alias="lambda")
    rho0: Real = 1.0
    k: Real = 2.0
    sigma: Real = 4.0

    @model_validator(mode="after")
    def _check_params(self) -> Self:
        if not self.A > 0.0:
            raise ValueError(f"amplitude A must be positive, got {self.A}")
        if self.family is WeightFamily.GAUSSIAN and not self.lam > 0.0:
            raise ValueError(f"gaussian needs lambda > 0, got {self.lam}")
        if self.family is WeightFamily.BUMP:
            if not self.rho0 > 0.0:
                raise ValueError(f"bump needs rho0 > 0, got {self.rho0}")
            if not self.k >= 1.0:
                raise ValueError(f"bump needs k >= 1, got {self.k}")
        # sigma <= N is representable; check_Ha reports the divergent L^1 norm
        if self.family is WeightFamily.POWERDECAY and not self.sigma > 0.0:
            raise ValueError(f"powerdecay needs sigma > 0, got {self.sigma}")
        return self

    def scaled(self, factor: float) -> WeightSpec:
        return self.model_copy(update={"A": self.A * factor})

    def __call__(self, r: FloatArray) -> FloatArray:
        r = np.asarray(r, dtype=np.float64)
        match self.family:
            case WeightFamily.GAUSSIAN:
                return self.A * np.exp(-self.lam * r**2)
            case WeightFamily.BUMP:
                base = np.clip(1.0 - (r / self.rho0) ** 2, 0.0, None)
                return self.A * base**self.k
            case WeightFamily.POWERDECAY:
                return self.A * (1.0 + r) ** (-self.sigma)
        raise WeightError(f"unknown family {self.family}")

    def power_integral(self, N: int, q: float) -> float:
        """Whole-space integral of a^q (inf when divergent)."""
        omega = sphere_area(N)
        match self.family:
            case WeightFamily.GAUSSIAN:
                return self.A**q * (math.pi / (self.lam * q)) ** (N / 2.0)
            case WeightFamily.BUMP:
                return self.A**q * omega * self.rho0**N / 2.0 * float(
                    beta_fn(N / 2.0, self.k * q + 1.0)
                )
            case WeightFamily.POWERDECAY:
                b = self.sigma * q - N
                if b <= 0.0:
                    return math.inf
                return self.A**q * omega * float(beta_fn(N, b))
        raise WeightError(f"unknown family {self.family}")

    def tail_integral(self, N: int, q: float, R: float) -> float:
        """Integral of a^q over |x| > R (inf when divergent)."""
        total = self.power_integral(N, q)
        if not math.isfinite(total):
            return math.inf
        match self.family:
            case WeightFamily.GAUSSIAN:
                return total * float(gammaincc(N / 2.0, self.lam * q * R**2))
            case WeightFamily.BUMP:
                if R >= self.rho0:
                    return 0.0
                x = (R / self.rho0) ** 2
                return total * (1.0 - float(betainc(N / 2.0, self.k * q + 1.0, x)))
            case WeightFamily.POWERDECAY:
                x = R / (1.0 + R)
                return total * (1.0 - float(betainc(N, self.sigma * q - N, x)))
        raise WeightError(f"unknown family {self.family}")

    def norm(self, N: int, q: float) -> float:
        return self.power_integral(N, q) ** (1.0 / q)


class WeightNorms(BaseModel):
    """Whole-space norms of one weight, at the exponents the bounds consume."""

    model_config = ConfigDict(extra="forbid", frozen=True)
    l1: float
    zeta: float
    gamma: float
    delta: float
    xi: float
    pstar_dual: float

    @classmethod
    def unit(cls) -> WeightNorms:
        return cls(l1=1.0, zeta=1.0, gamma=1.0, delta=1.0, xi=1.0, pstar_dual=1.0)

    def scaled(self, factor: float) -> WeightNorms:
        return WeightNorms(**{k: v * factor for k, v in self.model_dump().items()})


def sample(spec: WeightSpec, grid: RadialGrid) -> RadialField:
    return RadialField(grid, spec(grid.nodes))


def _norm_entry(spec: WeightSpec, field: RadialField, q: float) -> NormEntry:
    grid = field.grid
    analytic = spec.norm(grid.N, q)
    quadrature = lq_norm(field, q)
    tail = spec.tail_integral(grid.N, q, grid.R_max)
    if math.isfinite(analytic) and analytic > 0.0:
        rel_gap = abs(analytic - quadrature) / analytic
    else:
        rel_gap = math.inf
    return NormEntry(
        exponent=q, analytic=analytic, quadrature=quadrature, tail=tail, rel_gap=rel_gap
    )


def check_Ha(
    spec: WeightSpec,
    cfg: ExponentConfig,
    grid: RadialGrid,
    *,
    side: int = 1,
    xi: float | None = None,
) -> ValidationReport:
    """Integrability and positivity of a_i, plus the norms used downstream.

    Norms are reported for the exponents 1, zeta_i, gamma_i, delta_i, xi_i and
    (p_i*)'. ``xi`` defaults to the midpoint of the admissible window.

    Raises:
        WeightError: a negative sample, or a weight vanishing at the origin.
    """
    if side not in (1, 2):
        raise WeightError(f"side must be 1 or 2, got {side}")
    derived = derive_exponents(cfg)
    field = sample(spec, grid)
    if np.any(field.values < 0.0) or field.at_origin <= 0.0:
        raise WeightError(f"nonpositive weight sample for {spec.family.value}")

    zeta = cfg.zeta1 if side == 1 else cfg.zeta2
    exponents = {
        "l1": 1.0,
        "zeta": zeta,
        "gamma": derived.gamma1 if side == 1 else derived.gamma2,
        "delta": derived.delta1 if side == 1 else derived.delta2,
        "xi": xi if xi is not None else derived.xi_default(side),
        "pstar_dual": derived.p1_star_dual if side == 1 else derived.p2_star_dual,
    }
    norms: dict[str, NormEntry] = {}
    for name, q in exponents.items():
        if not (math.isfinite(q) and q >= 1.0):
            raise WeightError(f"exponent {name}={q} is not a Lebesgue exponent")
        norms[name] = _norm_entry(spec, field, q)

    checks = [
        CheckResult(name="a(0)>0", satisfied=True, margin=field.at_origin),
    ]
    for name, label in (("l1", "a in L^1"), ("zeta", "a in L^zeta")):
        q = exponents[name]
        finite = math.isfinite(norms[name].analytic)
        margin = spec.sigma * q - grid.N if spec.family is WeightFamily.POWERDECAY else None
        checks.append(CheckResult(name=label, satisfied=finite, margin=margin))

    if np.any(field.values == 0.0):
        ball = grid.sphere_area * grid.R_max**grid.N / grid.N
        zero_measure = ball - superlevel_measure(field, np.finfo(np.float64).tiny)
        checks.append(
            CheckResult(
                name="zero_weight_region",
                satisfied=True,
                margin=float(zero_measure),
                detail="weight vanishes outside its support inside the ball",
            )
        )
        _log.info(
            "zero_weight_region",
            extra={"family": spec.family.value, "measure": float(zero_measure)},
        )
    return ValidationReport(checks=checks, norms=norms)


def weight_norms(report: ValidationReport) -> WeightNorms:
    """Analytic whole-space norms out of a check_Ha report."""
    try:
        return WeightNorms(**{name: entry.analytic for name, entry in report.norms.items()})
    except ValidationError as e:
        raise WeightError(f"report does not carry the weight norms: {e}") from e


class InterpolationCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def interpolation_check(
    field: RadialField, p: float, q: float, tol: float = 1e-8
) -> InterpolationCheck:
    """||w||_q^q <= ||w||_1 + ||w||_p^p for 1 < q < p."""
    if not 1.0 < q < p:
        raise WeightError(f"need 1 < q < p, got q={q}, p={p}")
    w = abs(field)
    lhs = integrate(w.map(lambda x: x**q))
    rhs = integrate(w) + integrate(w.map(lambda x: x**p))
    return InterpolationCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs + tol * max(1.0, rhs))
