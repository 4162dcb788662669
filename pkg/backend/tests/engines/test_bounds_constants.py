"""Tests for the embedding constants and the Simon-type vector inequalities."""

import math

import numpy as np
import pytest

from app.engines.bounds import (
    BoundsError,
    simon_check,
    simon_check_batch,
    simon_constant,
    sobolev_constants,
    talenti_constant,
)
from app.engines.hypotheses import ExponentConfig


class TestTalenti:
    def test_three_dimensional_dirichlet_constant(self) -> None:
        # ||u||_6 <= S ||grad u||_2 with S^{-2} = 3 (pi/2)^{4/3}
        expected = 1.0 / math.sqrt(3.0 * (math.pi / 2.0) ** (4.0 / 3.0))
        assert talenti_constant(3, 2.0) == pytest.approx(expected, rel=1e-12)

    def test_positive_over_range(self) -> None:
        for N in (3, 4, 6):
            for p in np.linspace(1.05, N - 0.05, 9):
                assert talenti_constant(N, float(p)) > 0.0

    @pytest.mark.parametrize("p", [1.0, 3.0, 4.0])
    def test_out_of_range(self, p: float) -> None:
        with pytest.raises(BoundsError):
            talenti_constant(3, p)

    def test_sobolev_bundle(self, std_cfg: ExponentConfig) -> None:
        s = sobolev_constants(std_cfg)
        assert s.S1 == s.S2 == talenti_constant(3, 2.0)
        assert s.C_simon_1 == 1.0
        assert s.convention == "talenti"


class TestSimonConstant:
    def test_values(self) -> None:
        assert simon_constant(2.0) == 1.0
        assert simon_constant(3.0) == 0.5
        assert simon_constant(1.5) == 0.5
        with pytest.raises(BoundsError):
            simon_constant(1.0)


class TestSimonCheck:
    def test_p2_identity(self) -> None:
        result = simon_check([1.0, 0.0], [0.0, 1.0], 2.0)
        assert result.lhs == pytest.approx(2.0)
        assert result.rhs == pytest.approx(2.0)
        assert result.holds

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_equal_vectors(self, p: float) -> None:
        result = simon_check([0.3, -1.2, 2.0], [0.3, -1.2, 2.0], p)
        assert result.lhs == 0.0
        assert result.rhs == 0.0
        assert result.holds

    def test_both_zero_below_two(self) -> None:
        result = simon_check([0.0, 0.0], [0.0, 0.0], 1.5)
        assert result.rhs == 0.0
        assert result.holds

    def test_errors(self) -> None:
        with pytest.raises(BoundsError):
            simon_check([1.0], [0.0], 1.0)
        with pytest.raises(BoundsError):
            simon_check_batch(np.zeros((3, 2)), np.zeros((3, 3)), 2.0)

    @pytest.mark.parametrize("p", [1.5, 3.0])
    def test_random_pairs_have_no_violations(self, p: float) -> None:
        rng = np.random.default_rng(42)
        total = 0
        for dim in range(1, 6):
            m = 20_000
            scale = 10.0 ** rng.uniform(-3.0, 3.0, size=(m, 1))
            a = rng.normal(size=(m, dim)) * scale
            b = rng.normal(size=(m, dim)) * scale
            lhs, _, holds = simon_check_batch(a, b, p, tol=1e-12)
            assert np.all(holds)
            assert np.all(lhs >= 0.0)
            total += m
        assert total == 100_000

    def test_lhs_zero_only_on_diagonal(self) -> None:
        rng = np.random.default_rng(5)
        a = rng.normal(size=(1000, 3))
        b = a + rng.normal(size=(1000, 3)) * 1e-3
        lhs, _, _ = simon_check_batch(a, b, 3.0)
        assert np.all(lhs > 0.0)
