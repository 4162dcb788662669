"""Tests for real-parameter coercion (fractions, decimals, ints)."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import BaseModel, ValidationError

from app.core.param_type import ParamTypeError, Real, RealList, coerce_real, coerce_real_list


class _Model(BaseModel):
    x: Real
    xs: RealList = []


class TestCoerceReal:
    def test_fraction_strings(self) -> None:
        assert coerce_real("1/2") == 0.5
        assert coerce_real("-1/2") == -0.5
        assert coerce_real(" 3 / 4 ") == 0.75

    def test_decimal_and_int(self) -> None:
        assert coerce_real("0.25") == 0.25
        assert coerce_real(2) == 2.0
        assert coerce_real(1.5) == 1.5

    @pytest.mark.parametrize("bad", [None, "", "abc", "1/0", True, "inf", math.nan])
    def test_rejected(self, bad: object) -> None:
        with pytest.raises(ParamTypeError):
            coerce_real(bad)

    @given(st.integers(-1000, 1000), st.integers(1, 1000))
    def test_fraction_matches_division(self, num: int, den: int) -> None:
        assert coerce_real(f"{num}/{den}") == pytest.approx(num / den, rel=1e-15, abs=1e-300)


class TestCoerceRealList:
    def test_comma_string(self) -> None:
        assert coerce_real_list("1/4, 1/8,") == [0.25, 0.125]

    def test_list(self) -> None:
        assert coerce_real_list([1, "1/2", 0.25]) == [1.0, 0.5, 0.25]

    def test_scalar_rejected(self) -> None:
        with pytest.raises(ParamTypeError):
            coerce_real_list(3)


def test_annotated_types_in_models() -> None:
    m = _Model(x="-1/2", xs=["1/4", 0.125])
    assert m.x == -0.5
    assert m.xs == [0.25, 0.125]
    with pytest.raises(ValidationError):
        _Model(x="one half")
