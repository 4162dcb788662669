"""
Radial p-Laplacian with a frozen right-hand side.

    -div(|grad u|^{p-2} grad u) = h  in B_{R_max},  u radial.

The radial form is r^{N-1} phi_p(-u'(r)) = int_0^r s^{N-1} h(s) ds, so the
solve is two cumulative integrations with no nonlinear iteration. The flux
integral is taken over node-centred shells (finite volumes); on each cell the
mean value m = flux / (omega r^N) is frozen at the midpoint and the remaining
factor phi_p^{-1}(r m) = m^q r^q is integrated exactly (q = 1/(p-1)). This
never divides by r = 0, is exact for constant h, exactly homogeneous and
monotone in h, and for p = 2 satisfies the discrete weak form to round-off.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import TypeVar

import numpy as np

from app.engines.radial_grid import (
    FloatArray,
    RadialField,
    RadialGrid,
    gradient,
)
from app.engines.weights import WeightSpec, sample
from app.schemas_report import TruncationSensitivity

_log = logging.getLogger(__name__)

T = TypeVar("T", float, FloatArray)


class PLapError(ValueError):
    """Raised for an invalid p-Laplacian problem (p out of range, negative rhs)."""

    pass


class BoundaryClosure(str, Enum):
    # u(R_max) = 0
    DIRICHLET = "dirichlet"
    # u(R_max) = exterior part of the whole-space solution (rhs = 0 outside)
    FARFIELD = "farfield"


def phi_p(s: T, p: float | FloatArray) -> T:
    """|s|^{p-2} s; ``p`` may be an array broadcast against ``s``."""
    if np.any(np.asarray(p) <= 1.0):
        raise PLapError(f"phi_p needs p > 1, got {p}")
    return np.sign(s) * np.abs(s) ** (p - 1.0)  # type: ignore[no-any-return]


def phi_p_inv(t: T, p: float | FloatArray) -> T:
    """|t|^{1/(p-1)} sign(t), the inverse of :func:`phi_p`."""
    if np.any(np.asarray(p) <= 1.0):
        raise PLapError(f"phi_p_inv needs p > 1, got {p}")
    return np.sign(t) * np.abs(t) ** (1.0 / (p - 1.0))  # type: ignore[no-any-return]


@dataclass(frozen=True, eq=False)
class PLapProblem:
    p: float
    grid: RadialGrid
    rhs: RadialField

    def __post_init__(self) -> None:
        if not 1.0 < self.p < self.grid.N:
            raise PLapError(f"need 1 < p < N={self.grid.N}, got p={self.p}")
        if self.rhs.grid is not self.grid:
            raise PLapError("rhs lives on a different grid")
        if np.any(self.rhs.values < 0.0):
            raise PLapError("negative rhs node")


def cumulative_flux(problem: PLapProblem) -> FloatArray:
    """c_j = integral of h over the ball of radius r_{j+1/2}, one per cell."""
    grid = problem.grid
    return np.cumsum(grid.dual_volumes * problem.rhs.values)[:-1]


def _farfield_value(total: float, grid: RadialGrid, q: float) -> float:
    # u(R) = int_R^inf (C / (omega s^{N-1}))^q ds
    decay = (grid.N - 1) * q
    coeff = (total / grid.sphere_area) ** q
    return float(coeff * grid.R_max ** (1.0 - decay) / (decay - 1.0))


def solve(
    problem: PLapProblem, boundary: BoundaryClosure = BoundaryClosure.DIRICHLET
) -> RadialField:
    """Invert the radial p-Laplacian for a nonnegative frozen rhs.

    The result is nonnegative and nonincreasing, vanishes at R_max for the
    Dirichlet closure, and is positive wherever the cumulative flux is.
    """
    grid = problem.grid
    N, p = grid.N, problem.p
    q = 1.0 / (p - 1.0)
    r = grid.nodes

    c = cumulative_flux(problem)
    mean = c / (grid.sphere_area * grid.cell_mid**N)
    increments = phi_p_inv(mean, p) * (r[1:] ** (q + 1.0) - r[:-1] ** (q + 1.0)) / (q + 1.0)

    tail = 0.0
    if BoundaryClosure(boundary) is BoundaryClosure.FARFIELD:
        total = float(np.sum(grid.dual_volumes * problem.rhs.values))
        tail = _farfield_value(total, grid, q)
    values = np.empty_like(r)
    values[-1] = 0.0
    values[:-1] = np.cumsum(increments[::-1])[::-1]
    return RadialField(grid, values + tail)


def torsion(
    spec: WeightSpec,
    p: float,
    grid: RadialGrid,
    boundary: BoundaryClosure = BoundaryClosure.DIRICHLET,
) -> RadialField:
    """Solve -Delta_p w = a for the sampled weight and check w > 0 inside.

    Raises:
        PLapError: propagated from :func:`solve`, or a nonpositive interior value.
    """
    problem = PLapProblem(p=p, grid=grid, rhs=sample(spec, grid))
    w = solve(problem, boundary)
    interior = cumulative_flux(problem) > 0.0
    if not np.all(w.values[:-1][interior] > 0.0):
        raise PLapError("torsion function is not positive where the weight has mass")
    return w


def truncation_sensitivity(
    spec: WeightSpec,
    p: float,
    grid: RadialGrid,
    boundary: BoundaryClosure = BoundaryClosure.DIRICHLET,
) -> TruncationSensitivity:
    """Change of w(0) when the truncation radius doubles (same inner spacing)."""
    w0 = torsion(spec, p, grid, boundary).at_origin
    w0_doubled = torsion(spec, p, grid.extended(2), boundary).at_origin
    return TruncationSensitivity(
        r_max=grid.R_max,
        w_origin=w0,
        w_origin_doubled=w0_doubled,
        rel_change=abs(w0_doubled - w0) / abs(w0_doubled),
    )


def constant_rhs_solution(
    N: int, p: float, R_max: float, level: float = 1.0
) -> Callable[[FloatArray], FloatArray]:
    """Closed-form Dirichlet solution for h = level on B_{R_max}."""
    q = 1.0 / (p - 1.0)
    coeff = (level / N) ** q / (q + 1.0)

    def exact(r: FloatArray) -> FloatArray:
        return coeff * (R_max ** (q + 1.0) - np.asarray(r) ** (q + 1.0))

    return exact


# ---------------------------------------------------------------------------
# Weak form
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TestFunctionSet:
    """Nonnegative radial test functions vanishing at R_max."""

    __test__ = False  # not a pytest class

    functions: tuple[RadialField, ...]
    description: str

    def __post_init__(self) -> None:
        for phi in self.functions:
            if phi.min() < 0.0:
                raise PLapError("test functions must be nonnegative")
            if phi.values[-1] != 0.0:
                raise PLapError("test functions must vanish at R_max")

    @classmethod
    def polynomial_bumps(
        cls, grid: RadialGrid, count: int = 20, *, include_zero: bool = False
    ) -> TestFunctionSet:
        """phi_k = (1 - (r/rho_k)^2)_+^2 with rho_k = R_max k / count."""
        if count < 1:
            raise PLapError("need at least one test function")
        funcs = []
        for k in range(1, count + 1):
            rho = grid.R_max if k == count else grid.R_max * k / count
            base = np.clip(1.0 - (grid.nodes / rho) ** 2, 0.0, None)
            funcs.append(RadialField(grid, base**2))
        if include_zero:
            funcs.append(RadialField.zeros(grid))
        return cls(functions=tuple(funcs), description=f"polynomial_bumps[{count}]")

    @property
    def grid(self) -> RadialGrid:
        return self.functions[0].grid

    def matrix(self) -> FloatArray:
        return np.vstack([phi.values for phi in self.functions])

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self) -> Iterator[RadialField]:
        return iter(self.functions)


def weak_forms(
    u: RadialField, rhs: RadialField, p: float, tests: TestFunctionSet
) -> tuple[FloatArray, FloatArray]:
    """Both sides of the weak formulation, one entry per test function.

    The flux term uses cell-centred gradients with midpoint weights; the
    source term uses the node-centred shell volumes of the solver.
    """
    grid = u.grid
    if rhs.grid is not grid or tests.grid is not grid:
        raise PLapError("u, rhs and test functions must share a grid")
    flux = grid.cell_weights * phi_p(gradient(u), p)
    phis = tests.matrix()
    dphis = np.diff(phis, axis=1) / grid.cell_width
    lhs = dphis @ flux
    source = phis @ (grid.dual_volumes * rhs.values)
    return lhs, source


def weak_residual(
    u: RadialField, rhs: RadialField, p: float, tests: TestFunctionSet
) -> list[float]:
    """|int |grad u|^{p-2} grad u . grad phi - int rhs phi| per test function."""
    lhs, source = weak_forms(u, rhs, p, tests)
    return [float(x) for x in np.abs(lhs - source)]


def max_residual(residuals: Sequence[float]) -> float:
    return max(residuals, default=0.0)
