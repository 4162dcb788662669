"""
Independent reference values for the test suite.

The admissibility oracle is a straight-line rewrite of the exponent
conditions, one expression per inequality, with no shared helpers from
``app.engines.hypotheses``. Manufactured solutions pair a right-hand side h
with the exact radial solution of -Delta_p u = h on the unit ball (u(1) = 0).
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

Array = npt.NDArray[np.float64]


def admissible(
    N: int,
    p1: float,
    p2: float,
    alpha1: float,
    alpha2: float,
    beta1: float,
    beta2: float,
    m1: float,
    M1: float,
    m2: float,
    M2: float,
    zeta1: float,
    zeta2: float,
) -> bool:
    if not N >= 3:
        return False
    if not (1 < p1 < N and 1 < p2 < N):
        return False
    if not (-1 < alpha1 < 0 and -1 < beta2 < 0):
        return False
    if not (alpha2 > 0 and beta1 > 0):
        return False
    if not (0 < m1 <= M1 and 0 < m2 <= M2):
        return False
    if not alpha1 + alpha2 < p1 - 1:
        return False
    if not beta1 + beta2 < p2 - 1:
        return False
    if not (zeta1 > 1 and zeta2 > 1):
        return False
    p1s = N * p1 / (N - p1)
    p2s = N * p2 / (N - p2)
    if not beta1 < (p2s / p1s) * min(p1 - 1, p1s - p1):
        return False
    if not alpha2 < (p1s / p2s) * min(p2 - 1, p2s - p2):
        return False
    if not 1 / zeta1 <= 1 - p1 / p1s - beta1 / p2s:
        return False
    return 1 / zeta2 <= 1 - p2 / p2s - alpha2 / p1s


@dataclass(frozen=True)
class Manufactured:
    p: float
    N: int
    rhs: Callable[[Array], Array]
    exact: Callable[[Array], Array]


def _p2_rhs(r: Array) -> Array:
    return 1.0 + r**2


def _p2_exact(r: Array) -> Array:
    # -(r^2 u')' / r^2 = 1 + r^2 with u'(0) = 0, u(1) = 0
    return 1.0 / 6.0 + 1.0 / 20.0 - r**2 / 6.0 - r**4 / 20.0


def _p15_rhs(r: Array) -> Array:
    return 1.0 + r**2


def _p15_primitive(s: Array) -> Array:
    # -u' = (r/3 + r^3/5)^2, integrated from 0
    return s**3 / 27.0 + 2.0 * s**5 / 75.0 + s**7 / 175.0


def _p15_exact(r: Array) -> Array:
    return _p15_primitive(np.ones_like(r)) - _p15_primitive(r)


def _p3_rhs(r: Array) -> Array:
    return 5.0 * r


def _p3_exact(r: Array) -> Array:
    # r^3 (u')^2 = int_0^r 5 s^4 ds = r^5, so -u' = r
    return (1.0 - r**2) / 2.0


MANUFACTURED = (
    Manufactured(p=2.0, N=3, rhs=_p2_rhs, exact=_p2_exact),
    Manufactured(p=1.5, N=3, rhs=_p15_rhs, exact=_p15_exact),
)

# p = 3 needs N > 3
MANUFACTURED_P3 = Manufactured(p=3.0, N=4, rhs=_p3_rhs, exact=_p3_exact)


def kappa_recurrence(pstar: float, p: float, xi: float, kappa0: float, n: int) -> list[float]:
    """kappa_k from (kappa_k p + 1) xi' = (kappa_{k-1} + 1) p*, written out directly."""
    xi_conj = xi / (xi - 1.0)
    out = [kappa0]
    for _ in range(n):
        out.append(((out[-1] + 1.0) * pstar / xi_conj - 1.0) / p)
    return out
