"""Tests for the JSON, CSV and SVG writers."""

import json
from pathlib import Path

import pandas as pd

from app.cli.reporting import (
    write_json,
    write_profiles_csv,
    write_profiles_svg,
    write_stages_csv,
    write_sweep_csv,
)
from app.engines.radial_grid import RadialField, build_grid
from app.schemas_report import CheckResult, StageReport, SweepRow, ValidationReport


def _fields() -> dict[str, RadialField]:
    grid = build_grid(3, 2.0, 64)
    u = RadialField.from_function(grid, lambda r: 1.0 - r**2 / 4.0)
    return {"u": u, "v": u * 0.5}


def _stage(index: int) -> StageReport:
    return StageReport(
        index=index,
        eps=0.25 / 2**index,
        converged=True,
        iterations=7,
        final_moved=1e-9,
        theta=1.0,
        clamp_events=0,
        max_bracket_violation=0.0,
        residual_u_max=1e-12,
        residual_v_max=2e-12,
        u0=1.0,
        v0=0.5,
        grad_u=0.3,
        grad_v=0.2,
        schauder_grad_bound_u=10.0,
        schauder_grad_bound_v=11.0,
    )


class TestWriters:
    def test_json(self, tmp_path: Path) -> None:
        report = ValidationReport(checks=[CheckResult(name="p1 < N", satisfied=True, margin=1.0)])
        path = write_json(report, tmp_path / "check.json")
        data = json.loads(path.read_text())
        assert data["overall"] is True
        assert data["checks"][0]["margin"] == 1.0

    def test_profiles_csv(self, tmp_path: Path) -> None:
        path = write_profiles_csv(_fields(), tmp_path / "profiles.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["r", "u", "v"]
        assert len(frame) == 64
        assert frame["u"].iloc[0] == 1.0
        assert frame["v"].iloc[-1] == 0.0

    def test_stages_csv_drops_history(self, tmp_path: Path) -> None:
        frame = pd.read_csv(write_stages_csv([_stage(0), _stage(1)], tmp_path / "stages.csv"))
        assert "history" not in frame.columns
        assert list(frame["eps"]) == [0.25, 0.125]

    def test_sweep_csv(self, tmp_path: Path) -> None:
        rows = [
            SweepRow(parameter="r_max", value=4.0, converged=True, certified=True, u0=0.4),
            SweepRow(parameter="r_max", value=8.0, converged=False, certified=False, error="stalled"),
        ]
        frame = pd.read_csv(write_sweep_csv(rows, tmp_path / "sweep.csv"))
        assert list(frame["converged"]) == [True, False]
        assert frame["error"].iloc[1] == "stalled"

    def test_floats_round_trip(self, tmp_path: Path) -> None:
        grid = build_grid(3, 1.0, 32)
        field = RadialField.from_function(grid, lambda r: 1.0 / (3.0 + r))
        path = write_profiles_csv({"w": field}, tmp_path / "w.csv")
        frame = pd.read_csv(path, float_precision="round_trip")
        assert list(frame["w"]) == list(field.values)

    def test_svg_is_deterministic(self, tmp_path: Path) -> None:
        first = write_profiles_svg(_fields(), tmp_path / "a.svg", "eps = 0.25").read_bytes()
        second = write_profiles_svg(_fields(), tmp_path / "b.svg", "eps = 0.25").read_bytes()
        assert first.startswith(b"<?xml")
        assert first == second
