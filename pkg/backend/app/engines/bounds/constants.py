"""Embedding and strong-monotonicity constants."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from scipy.special import gammaln

from app.engines.bounds.errors import BoundsError
from app.engines.hypotheses import ExponentConfig
from app.schemas_report import SobolevConstants

CONVENTION_TALENTI = "talenti"
CONVENTION_UNIT = "unit"


def talenti_constant(N: int, p: float) -> float:
    """Optimal constant S of ||u||_{p*} <= S ||grad u||_p in R^N, 1 < p < N."""
    if not 1.0 < p < N:
        raise BoundsError(f"Sobolev constant needs 1 < p < N={N}, got p={p}")
    log_ratio = (
        gammaln(1.0 + N / 2.0)
        + gammaln(N)
        - gammaln(N / p)
        - gammaln(1.0 + N - N / p)
    )
    return float(
        math.pi ** (-0.5)
        * N ** (-1.0 / p)
        * ((p - 1.0) / (N - p)) ** (1.0 - 1.0 / p)
        * math.exp(log_ratio / N)
    )


def simon_constant(p: float) -> float:
    """C_p: 2^{2-p} for p >= 2, p - 1 for 1 < p < 2."""
    if p <= 1.0:
        raise BoundsError(f"Simon constant needs p > 1, got {p}")
    return 2.0 ** (2.0 - p) if p >= 2.0 else p - 1.0


def sobolev_constants(cfg: ExponentConfig) -> SobolevConstants:
    return SobolevConstants(
        S1=talenti_constant(cfg.N, cfg.p1),
        S2=talenti_constant(cfg.N, cfg.p2),
        C_simon_1=simon_constant(cfg.p1),
        C_simon_2=simon_constant(cfg.p2),
        convention=CONVENTION_TALENTI,
    )


# ---------------------------------------------------------------------------
# Simon-type vector inequalities
# ---------------------------------------------------------------------------


class SimonCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def _phi_vec(a: npt.NDArray[np.float64], p: float) -> npt.NDArray[np.float64]:
    norm = np.linalg.norm(a, axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norm > 0.0, norm ** (p - 2.0), 0.0)
    return scale * a


def simon_check_batch(
    a: npt.ArrayLike, b: npt.ArrayLike, p: float, tol: float = 1e-12
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.bool_]]:
    """Row-wise Simon inequality for arrays of shape (m, d)."""
    if p <= 1.0:
        raise BoundsError(f"Simon inequality needs p > 1, got {p}")
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape != b.shape:
        raise BoundsError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = a - b
    lhs = np.sum((_phi_vec(a, p) - _phi_vec(b, p)) * diff, axis=-1)
    dist = np.linalg.norm(diff, axis=-1)
    c_p = simon_constant(p)
    if p >= 2.0:
        rhs = c_p * dist**p
    else:
        size = np.linalg.norm(a, axis=-1) + np.linalg.norm(b, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rhs = np.where(size > 0.0, c_p * dist**2 / size ** (2.0 - p), 0.0)
    holds = lhs >= rhs - tol * np.maximum(1.0, rhs)
    return lhs, rhs, holds


def simon_check(
    a: npt.ArrayLike, b: npt.ArrayLike, p: float, tol: float = 1e-12
) -> SimonCheck:
    """(|a|^{p-2}a - |b|^{p-2}b).(a - b) against its Simon lower bound."""
    lhs, rhs, holds = simon_check_batch(a, b, p, tol)
    return SimonCheck(lhs=float(lhs[0]), rhs=float(rhs[0]), holds=bool(holds[0]))
