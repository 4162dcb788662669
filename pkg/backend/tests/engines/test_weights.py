"""Tests for the weight families, their norms and the (H_a) report."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.engines.hypotheses import ExponentConfig
from app.engines.radial_grid import RadialField, build_grid
from app.engines.weights import (
    WeightError,
    WeightFamily,
    WeightNorms,
    WeightSpec,
    check_Ha,
    interpolation_check,
    sample,
    weight_norms,
)
from app.schemas_report import ValidationReport

LATTICE = [
    (1.5, 2.0),
    (1.5, 4.0),
    (2.0, 3.0),
    (2.0, 4.0),
    (2.0, 6.0),
    (3.0, 4.0),
    (3.0, 6.0),
    (4.0, 5.0),
    (4.0, 6.0),
    (5.0, 6.0),
]

FAMILIES = [
    WeightSpec(family=WeightFamily.GAUSSIAN, A=1.0, lam=1.0),
    WeightSpec(family=WeightFamily.BUMP, A=1.0, rho0=1.0, k=2.0),
    WeightSpec(family=WeightFamily.POWERDECAY, A=1.0, sigma=4.0),
]


@pytest.fixture(scope="module")
def fine_grid():
    return build_grid(3, 8.0, 4096)


class TestWeightSpec:
    def test_sample_values(self, small_grid) -> None:
        assert sample(FAMILIES[0], small_grid).at_origin == 1.0
        assert FAMILIES[1](np.array([2.0]))[0] == 0.0
        assert FAMILIES[2](np.array([1.0]))[0] == pytest.approx(1.0 / 16.0)

    def test_lambda_alias(self) -> None:
        spec = WeightSpec.model_validate({"family": "gaussian", "lambda": 2.0})
        assert spec.lam == 2.0
        assert spec.model_dump(by_alias=True)["lambda"] == 2.0

    @pytest.mark.parametrize(
        "data",
        [
            {"family": "gaussian", "A": 0.0},
            {"family": "gaussian", "lambda": -1.0},
            {"family": "bump", "rho0": 0.0},
            {"family": "bump", "k": 0.5},
            {"family": "powerdecay", "sigma": 0.0},
            {"family": "spline"},
            {"family": "gaussian", "width": 1.0},
        ],
    )
    def test_rejected(self, data: dict[str, object]) -> None:
        with pytest.raises(ValidationError):
            WeightSpec.model_validate(data)

    def test_scaled(self) -> None:
        assert FAMILIES[0].scaled(3.0).A == 3.0

    @pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: s.family.value)
    @pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
    def test_quadrature_plus_tail_matches_analytic(self, spec: WeightSpec, q: float, fine_grid) -> None:
        field = sample(spec, fine_grid)
        quad = float(np.dot(fine_grid.quad_weights, field.values**q))
        tail = spec.tail_integral(3, q, fine_grid.R_max)
        assert quad + tail == pytest.approx(spec.power_integral(3, q), rel=1e-4)

    def test_powerdecay_divergent(self) -> None:
        spec = WeightSpec(family=WeightFamily.POWERDECAY, sigma=2.5)
        assert math.isinf(spec.power_integral(3, 1.0))
        assert math.isinf(spec.tail_integral(3, 1.0, 8.0))


class TestCheckHa:
    def test_gaussian_std(self, std_cfg: ExponentConfig, gaussian: WeightSpec, fine_grid) -> None:
        report = check_Ha(gaussian, std_cfg, fine_grid)
        assert report.overall
        assert report.norms["l1"].analytic == pytest.approx(math.pi**1.5)
        assert report.norms["zeta"].analytic == pytest.approx((math.pi / 4.0) ** 0.375)
        assert report.norms["l1"].rel_gap < 1e-6
        assert report.norms["zeta"].rel_gap < 1e-6
        assert set(report.norms) == {"l1", "zeta", "gamma", "delta", "xi", "pstar_dual"}
        assert report.norms["xi"].exponent == pytest.approx(2.75)

    def test_explicit_xi(self, std_cfg: ExponentConfig, gaussian: WeightSpec, small_grid) -> None:
        report = check_Ha(gaussian, std_cfg, small_grid, side=2, xi=2.0)
        assert report.norms["xi"].exponent == 2.0

    def test_powerdecay_fails_l1(self, std_cfg: ExponentConfig, small_grid) -> None:
        spec = WeightSpec(family=WeightFamily.POWERDECAY, sigma=2.5)
        report = check_Ha(spec, std_cfg, small_grid)
        assert not report.overall
        assert "a in L^1" in report.failed()
        assert report.get("a in L^1").margin == pytest.approx(-0.5)

    def test_bump_flags_zero_region(self, std_cfg: ExponentConfig, small_grid) -> None:
        report = check_Ha(FAMILIES[1], std_cfg, small_grid)
        assert report.overall
        zero = report.get("zero_weight_region")
        ball = 4.0 * math.pi / 3.0 * 8.0**3
        assert zero.margin == pytest.approx(ball - 4.0 * math.pi / 3.0, rel=1e-3)

    def test_bad_side(self, std_cfg: ExponentConfig, gaussian: WeightSpec, small_grid) -> None:
        with pytest.raises(WeightError):
            check_Ha(gaussian, std_cfg, small_grid, side=3)

    def test_weight_norms_bundle(self, std_cfg: ExponentConfig, gaussian: WeightSpec, small_grid) -> None:
        norms = weight_norms(check_Ha(gaussian, std_cfg, small_grid))
        assert norms.l1 == pytest.approx(math.pi**1.5)
        assert norms.scaled(2.0).l1 == pytest.approx(2.0 * math.pi**1.5)
        assert WeightNorms.unit().gamma == 1.0
        with pytest.raises(WeightError):
            weight_norms(ValidationReport())


class TestInterpolation:
    def test_gaussian_p4_q2(self, fine_grid) -> None:
        field = sample(FAMILIES[0], fine_grid)
        result = interpolation_check(field, 4.0, 2.0)
        assert result.holds
        assert result.lhs == pytest.approx((math.pi / 2.0) ** 1.5, rel=1e-6)
        assert result.rhs == pytest.approx(math.pi**1.5 + (math.pi / 4.0) ** 1.5, rel=1e-6)

    def test_zero(self, small_grid) -> None:
        result = interpolation_check(RadialField.zeros(small_grid), 3.0, 2.0)
        assert result.lhs == 0.0
        assert result.rhs == 0.0
        assert result.holds

    @pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: s.family.value)
    @pytest.mark.parametrize("q, p", LATTICE)
    def test_holds_on_lattice(self, spec: WeightSpec, q: float, p: float, small_grid) -> None:
        for scale in (0.1, 1.0, 10.0):
            assert interpolation_check(sample(spec.scaled(scale), small_grid), p, q).holds

    @pytest.mark.parametrize("q, p", [(1.0, 2.0), (3.0, 2.0), (2.0, 2.0)])
    def test_bad_exponents(self, q: float, p: float, small_grid) -> None:
        with pytest.raises(WeightError):
            interpolation_check(RadialField.zeros(small_grid), p, q)
