"""
Real-parameter coercion for run configs.

Exponents in the run config may be written as decimals (``0.5``), integers or
exact fractions (``"1/2"``, ``"-1/2"``). Everything is coerced to ``float``
before pydantic's own float validation runs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Annotated, Any

from pydantic import BeforeValidator


class ParamTypeError(ValueError):
    """Raised when a parameter cannot be coerced to a real number."""

    pass


def coerce_real(value: Any) -> float:
    if value is None:
        raise ParamTypeError("Value is empty")
    if isinstance(value, bool):
        raise ParamTypeError("Boolean not allowed for a real parameter")
    if isinstance(value, int | float):
        x = float(value)
    else:
        s = str(value).strip().replace(" ", "")
        if not s:
            raise ParamTypeError("Value is empty")
        try:
            x = float(Fraction(s))
        except (ValueError, ZeroDivisionError) as e:
            raise ParamTypeError(f"Invalid real: {value!r}") from e
    if not math.isfinite(x):
        raise ParamTypeError(f"Non-finite real: {value!r}")
    return x


def coerce_real_list(value: Any) -> list[float]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    if not isinstance(value, list | tuple):
        raise ParamTypeError(f"Expected a list of reals, got {type(value).__name__}")
    return [coerce_real(v) for v in value]


Real = Annotated[float, BeforeValidator(coerce_real)]
RealList = Annotated[list[float], BeforeValidator(coerce_real_list)]
