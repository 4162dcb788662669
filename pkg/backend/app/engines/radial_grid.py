"""
Graded radial grids on [0, R_max] and discrete calculus for radial profiles.

A radial function on the ball B_{R_max}(0) of R^N is represented by its nodal
values. Integrals carry the r^{N-1} weight and the unit-sphere area, so
``integrate`` approximates the full N-dimensional integral.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy.special import gamma as gamma_fn

_log = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

MIN_NODES = 16


class GridError(ValueError):
    """Raised for invalid grid parameters or malformed fields."""

    pass


class Grading(str, Enum):
    UNIFORM = "uniform"
    GEOMETRIC = "geometric"


def sphere_area(N: int) -> float:
    """Surface area of the unit sphere in R^N: 2 pi^{N/2} / Gamma(N/2)."""
    return float(2.0 * math.pi ** (N / 2.0) / gamma_fn(N / 2.0))


def _readonly(a: npt.ArrayLike) -> FloatArray:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing nodes 0 = r_0 < ... < r_n = R_max."""

    N: int
    R_max: float
    nodes: FloatArray
    grading: Grading = Grading.UNIFORM
    ratio: float | None = None

    def __post_init__(self) -> None:
        nodes = _readonly(self.nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise GridError("grid needs at least two nodes")
        if nodes[0] != 0.0 or not np.all(np.diff(nodes) > 0.0):
            raise GridError("nodes must start at 0 and be strictly increasing")
        if nodes[-1] != self.R_max:
            raise GridError("last node must equal R_max")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.size)

    @cached_property
    def cell_width(self) -> FloatArray:
        return _readonly(np.diff(self.nodes))

    @cached_property
    def cell_mid(self) -> FloatArray:
        return _readonly(0.5 * (self.nodes[:-1] + self.nodes[1:]))

    @cached_property
    def sphere_area(self) -> float:
        return sphere_area(self.N)

    @cached_property
    def quad_weights(self) -> FloatArray:
        """Composite-trapezoid weights of f -> omega * int_0^R f r^{N-1} dr."""
        h = self.cell_width
        half = np.zeros_like(self.nodes)
        half[:-1] += 0.5 * h
        half[1:] += 0.5 * h
        return _readonly(self.sphere_area * half * self.nodes ** (self.N - 1))

    @cached_property
    def cell_weights(self) -> FloatArray:
        """Midpoint-rule weights for cell-centred quantities (gradients)."""
        return _readonly(self.sphere_area * self.cell_mid ** (self.N - 1) * self.cell_width)

    @cached_property
    def dual_volumes(self) -> FloatArray:
        """R^N measure of the node-centred shells [r_{k-1/2}, r_{k+1/2}].

        The first shell starts at 0 and the last one ends at R_max, so the
        volumes sum to the measure of the ball.
        """
        edges = np.concatenate(([0.0], self.cell_mid, [self.R_max]))
        powered = edges**self.N
        return _readonly(self.sphere_area * np.diff(powered) / self.N)

    def shell_measure(self, a: FloatArray, b: FloatArray) -> FloatArray:
        return self.sphere_area * (b**self.N - a**self.N) / self.N

    def extended(self, factor: int = 2) -> RadialGrid:
        """Same spacing near the origin, truncation radius ``factor * R_max``."""
        if factor < 1:
            raise GridError("extension factor must be >= 1")
        target = factor * self.R_max
        if self.grading is Grading.UNIFORM:
            n = factor * (self.n_nodes - 1) + 1
            return build_grid(self.N, target, n, Grading.UNIFORM, enforce_min_nodes=False)
        ratio = float(self.ratio or 1.0)
        widths = list(self.cell_width)
        total = float(self.R_max)
        w = widths[-1]
        while total < target:
            w *= ratio
            widths.append(w)
            total += w
        nodes = np.concatenate(([0.0], np.cumsum(widths)))
        nodes[-1] = target
        # merge a sliver last cell into its neighbour
        if nodes.size > 3 and nodes[-1] - nodes[-2] < 0.5 * (nodes[-2] - nodes[-3]):
            nodes = np.delete(nodes, -2)
        return RadialGrid(
            N=self.N, R_max=target, nodes=nodes, grading=self.grading, ratio=self.ratio
        )


def build_grid(
    N: int,
    R_max: float,
    n: int,
    grading: Grading | str = Grading.UNIFORM,
    ratio: float | None = None,
    *,
    enforce_min_nodes: bool = True,
) -> RadialGrid:
    """Build a uniform or geometric grid with ``n`` nodes on [0, R_max].

    Geometric grading uses cell widths h_0 * ratio^k, so the spacing grows by
    exactly ``ratio`` from the origin outwards.

    Raises:
        GridError: nonpositive R_max, too few nodes, bad ratio.
    """
    grading = Grading(grading)
    if not R_max > 0.0 or not math.isfinite(R_max):
        raise GridError(f"R_max must be positive, got {R_max}")
    if N < 1:
        raise GridError(f"dimension must be >= 1, got {N}")
    if n < 2 or (enforce_min_nodes and n < MIN_NODES):
        raise GridError(f"need at least {MIN_NODES} nodes, got {n}")

    if grading is Grading.UNIFORM:
        nodes = np.linspace(0.0, R_max, n)
        ratio = None
    else:
        if ratio is None or not ratio > 1.0:
            raise GridError(f"geometric grading needs ratio > 1, got {ratio}")
        k = np.arange(n - 1, dtype=np.float64)
        h0 = R_max * (ratio - 1.0) / (ratio ** (n - 1) - 1.0)
        nodes = np.concatenate(([0.0], np.cumsum(h0 * ratio**k)))
    nodes[-1] = R_max
    return RadialGrid(N=N, R_max=float(R_max), nodes=nodes, grading=grading, ratio=ratio)


@dataclass(frozen=True, eq=False)
class RadialField:
    """Nodal values of a radial profile on a fixed grid."""

    grid: RadialGrid
    values: FloatArray

    def __post_init__(self) -> None:
        values = _readonly(self.values)
        if values.shape != self.grid.nodes.shape:
            raise GridError(
                f"field has {values.size} values for {self.grid.n_nodes} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise GridError("field values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: RadialGrid) -> RadialField:
        return cls(grid, np.zeros(grid.n_nodes))

    @classmethod
    def constant(cls, grid: RadialGrid, c: float) -> RadialField:
        return cls(grid, np.full(grid.n_nodes, float(c)))

    @classmethod
    def from_function(
        cls, grid: RadialGrid, fn: Callable[[FloatArray], npt.ArrayLike]
    ) -> RadialField:
        return cls(grid, np.broadcast_to(np.asarray(fn(grid.nodes), dtype=np.float64), grid.nodes.shape))

    def with_values(self, values: npt.ArrayLike) -> RadialField:
        return RadialField(self.grid, np.asarray(values, dtype=np.float64))

    def map(self, fn: Callable[[FloatArray], npt.ArrayLike]) -> RadialField:
        return self.with_values(fn(self.values))

    def _other(self, other: RadialField | float) -> FloatArray | float:
        if isinstance(other, RadialField):
            if other.grid is not self.grid:
                raise GridError("fields live on different grids")
            return other.values
        return float(other)

    def __add__(self, other: RadialField | float) -> RadialField:
        return self.with_values(self.values + self._other(other))

    def __sub__(self, other: RadialField | float) -> RadialField:
        return self.with_values(self.values - self._other(other))

    def __mul__(self, other: RadialField | float) -> RadialField:
        return self.with_values(self.values * self._other(other))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> RadialField:
        return self.with_values(-self.values)

    def __abs__(self) -> RadialField:
        return self.with_values(np.abs(self.values))

    def max(self) -> float:
        return float(np.max(self.values))

    def min(self) -> float:
        return float(np.min(self.values))

    @property
    def at_origin(self) -> float:
        return float(self.values[0])


# ---------------------------------------------------------------------------
# Discrete calculus
# ---------------------------------------------------------------------------


def integrate(field: RadialField) -> float:
    """omega_{N-1} * int_0^{R_max} f(r) r^{N-1} dr by composite trapezoid."""
    return float(np.dot(field.grid.quad_weights, field.values))


def lq_norm(field: RadialField, q: float) -> float:
    if q < 1.0:
        raise GridError(f"L^q norm needs q >= 1, got {q}")
    total = float(np.dot(field.grid.quad_weights, np.abs(field.values) ** q))
    return total ** (1.0 / q)


def gradient(field: RadialField) -> FloatArray:
    """Cell-centred derivative (u_{j+1} - u_j) / h_j."""
    return np.diff(field.values) / field.grid.cell_width


def grad_seminorm(field: RadialField, p: float) -> float:
    if p <= 1.0:
        raise GridError(f"gradient seminorm needs p > 1, got {p}")
    du = np.abs(gradient(field))
    return float(np.dot(field.grid.cell_weights, du**p)) ** (1.0 / p)


def superlevel_measure(field: RadialField, k: float) -> float:
    """Measure of {f > k}; crossing radii are linearly interpolated per cell."""
    if k <= 0.0:
        raise GridError(f"threshold must be positive, got {k}")
    grid = field.grid
    a, b = grid.nodes[:-1], grid.nodes[1:]
    fa, fb = field.values[:-1], field.values[1:]
    above_a, above_b = fa > k, fb > k

    lo = np.where(above_a, a, b)
    hi = np.where(above_b, b, a)
    crossing = above_a != above_b
    with np.errstate(divide="ignore", invalid="ignore"):
        rc = a + (k - fa) / (fb - fa) * (b - a)
    # entering the set mid-cell (increasing f) or leaving it (decreasing f)
    lo = np.where(crossing & above_b, rc, lo)
    hi = np.where(crossing & above_a, rc, hi)
    inside = above_a | above_b
    lo, hi = np.where(inside, lo, 0.0), np.where(inside, hi, 0.0)
    return float(np.sum(grid.shell_measure(lo, hi)))


def to_frame(fields: Mapping[str, RadialField]) -> pd.DataFrame:
    """Tabulate fields that share a grid as (r, name_1, name_2, ...) columns."""
    if not fields:
        raise GridError("no fields to tabulate")
    grids = {id(f.grid) for f in fields.values()}
    if len(grids) != 1:
        raise GridError("fields live on different grids")
    grid = next(iter(fields.values())).grid
    data: dict[str, FloatArray] = {"r": np.asarray(grid.nodes)}
    data.update({name: np.asarray(f.values) for name, f in fields.items()})
    return pd.DataFrame(data)
