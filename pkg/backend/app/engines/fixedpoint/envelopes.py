"""
Sub- and supersolution barriers built from the torsion functions.

Each barrier is a scalar multiple of w_i; the factors follow from the
two-sided bounds of the frozen right-hand sides and the (p-1)-homogeneity of
the radial solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from app.engines.hypotheses import ExponentConfig
from app.engines.radial_grid import RadialField


class EnvelopeError(ValueError):
    """Raised for eps outside ]0, 1[, R < 1, or an input outside the envelope box."""

    pass


def truncate(z: RadialField, R: float) -> RadialField:
    """Nodewise min{z, R}."""
    if not R > 0.0:
        raise EnvelopeError(f"truncation level must be positive, got {R}")
    return z.map(lambda values: np.minimum(values, R))


class EnvelopeFactors(NamedTuple):
    u_lo: float
    v_lo: float
    u_hi: float
    v_hi: float


def envelope_factors(cfg: ExponentConfig, R: float, eps: float) -> EnvelopeFactors:
    """Scalar multipliers of w1, w2 for the four barriers; eps may equal 1 here."""
    if not 0.0 < eps <= 1.0:
        raise EnvelopeError(f"eps must lie in ]0, 1], got {eps}")
    q1 = 1.0 / (cfg.p1 - 1.0)
    q2 = 1.0 / (cfg.p2 - 1.0)
    return EnvelopeFactors(
        u_lo=(cfg.m1 * (R + 1.0) ** cfg.alpha1) ** q1,
        v_lo=(cfg.m2 * (R + 1.0) ** cfg.beta2) ** q2,
        u_hi=(cfg.M1 * eps**cfg.alpha1 * (1.0 + R**cfg.beta1)) ** q1,
        v_hi=(cfg.M2 * eps**cfg.beta2 * (1.0 + R**cfg.alpha2)) ** q2,
    )


@dataclass(frozen=True, eq=False)
class EnvelopeSet:
    u_lo: RadialField
    v_lo: RadialField
    u_hi: RadialField
    v_hi: RadialField
    eps: float
    R: float

    def violations(self, u: RadialField, v: RadialField) -> dict[str, float]:
        """Largest nodewise violation of each of the four box inequalities (0 if none)."""
        return {
            "u>=u_lo": max(0.0, float(np.max(self.u_lo.values - u.values))),
            "u<=u_hi": max(0.0, float(np.max(u.values - self.u_hi.values))),
            "v>=v_lo": max(0.0, float(np.max(self.v_lo.values - v.values))),
            "v<=v_hi": max(0.0, float(np.max(v.values - self.v_hi.values))),
        }

    def max_violation(self, u: RadialField, v: RadialField) -> float:
        return max(self.violations(u, v).values())

    def contains(self, u: RadialField, v: RadialField, tol: float = 1e-12) -> bool:
        return self.max_violation(u, v) <= tol

    def clamp(self, u: RadialField, v: RadialField) -> tuple[RadialField, RadialField, int]:
        """Project onto the box; returns the number of nodes moved."""
        cu = np.clip(u.values, self.u_lo.values, self.u_hi.values)
        cv = np.clip(v.values, self.v_lo.values, self.v_hi.values)
        moved = int(np.count_nonzero(cu != u.values) + np.count_nonzero(cv != v.values))
        return u.with_values(cu), v.with_values(cv), moved


def envelopes(
    cfg: ExponentConfig, w1: RadialField, w2: RadialField, R: float, eps: float
) -> EnvelopeSet:
    """The box K_eps between lower barriers (eps-free) and upper barriers.

    Raises:
        EnvelopeError: eps outside ]0, 1[ or R < 1.
    """
    if not 0.0 < eps < 1.0:
        raise EnvelopeError(f"eps must lie in ]0, 1[, got {eps}")
    if R < 1.0:
        raise EnvelopeError(f"R must be >= 1, got {R}")
    if w1.grid is not w2.grid:
        raise EnvelopeError("torsion functions live on different grids")
    k = envelope_factors(cfg, R, eps)
    return EnvelopeSet(
        u_lo=w1 * k.u_lo,
        v_lo=w2 * k.v_lo,
        u_hi=w1 * k.u_hi,
        v_hi=w2 * k.v_hi,
        eps=eps,
        R=R,
    )
