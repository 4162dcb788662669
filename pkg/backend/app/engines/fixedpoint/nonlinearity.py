"""Model reaction terms f(s, t) = s^{alpha1} (1 + t^{beta1}) and g(s, t) = (1 + s^{alpha2}) t^{beta2}."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from app.engines.hypotheses import ExponentConfig
from app.engines.radial_grid import FloatArray


class NonlinearityError(ValueError):
    """Raised for a nonpositive singular argument or incompatible m_i, M_i."""

    pass


class NonlinearityKind(str, Enum):
    MODEL_F = "model_f"
    MODEL_G = "model_g"


@dataclass(frozen=True)
class Nonlinearity:
    kind: NonlinearityKind
    cfg: ExponentConfig

    def __post_init__(self) -> None:
        m, M = (
            (self.cfg.m1, self.cfg.M1)
            if self.kind is NonlinearityKind.MODEL_F
            else (self.cfg.m2, self.cfg.M2)
        )
        # the model terms saturate both growth bounds with constant 1
        if not m <= 1.0 <= M:
            raise NonlinearityError(f"{self.kind.value} needs m <= 1 <= M, got m={m}, M={M}")

    @classmethod
    def model_f(cls, cfg: ExponentConfig) -> Nonlinearity:
        return cls(NonlinearityKind.MODEL_F, cfg)

    @classmethod
    def model_g(cls, cfg: ExponentConfig) -> Nonlinearity:
        return cls(NonlinearityKind.MODEL_G, cfg)

    def __call__(self, s: npt.ArrayLike, t: npt.ArrayLike) -> FloatArray:
        s = np.asarray(s, dtype=np.float64)
        t = np.asarray(t, dtype=np.float64)
        if self.kind is NonlinearityKind.MODEL_F:
            if np.any(s <= 0.0):
                raise NonlinearityError("f needs a positive first argument")
            if np.any(t < 0.0):
                raise NonlinearityError("f needs a nonnegative second argument")
            return s**self.cfg.alpha1 * (1.0 + t**self.cfg.beta1)  # type: ignore[no-any-return]
        if np.any(t <= 0.0):
            raise NonlinearityError("g needs a positive second argument")
        if np.any(s < 0.0):
            raise NonlinearityError("g needs a nonnegative first argument")
        return (1.0 + s**self.cfg.alpha2) * t**self.cfg.beta2  # type: ignore[no-any-return]


def eval_f(s: npt.ArrayLike, t: npt.ArrayLike, cfg: ExponentConfig) -> FloatArray:
    return Nonlinearity.model_f(cfg)(s, t)


def eval_g(s: npt.ArrayLike, t: npt.ArrayLike, cfg: ExponentConfig) -> FloatArray:
    return Nonlinearity.model_g(cfg)(s, t)
