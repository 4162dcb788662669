"""Tests for the subcommands and the exit-code mapping of ``main``."""

import json
from pathlib import Path

import pytest

from app.cli.commands import ExitCode, cmd_bounds, cmd_check, cmd_solve
from app.engines.hypotheses import InadmissibleConfigError
from app.main import build_parser, main
from tests.utils.run_configs import write_config

INADMISSIBLE = {'alpha1 = "-1/2"': 'alpha1 = "-1"'}
FORCED_FAILURE = {"\ntol = 1e-8": "\ntol = 1e-30", "max_iter = 200": "max_iter = 5"}


class TestParser:
    def test_solve_formats(self) -> None:
        args = build_parser().parse_args(
            ["solve", "--config", "x.toml", "--format", "json", "--format", "svg"]
        )
        assert args.formats == ["json", "svg"]
        assert args.out is None

    def test_sweep(self) -> None:
        args = build_parser().parse_args(
            ["sweep", "--config", "x.toml", "--parameter", "r_max", "--values", "4,8", "--jobs", "2"]
        )
        assert (args.parameter, args.values, args.jobs) == ("r_max", "4,8", 2)

    def test_unknown_parameter(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args(["sweep", "--config", "x", "--parameter", "p1", "--values", "2"])


class TestCheck:
    def test_reference(self, tmp_path: Path) -> None:
        result = cmd_check(write_config(tmp_path))
        assert result.exit_code is ExitCode.OK
        report = result.report
        assert report.overall
        assert "a1: a in L^1" in [c.name for c in report.checks]
        assert "a2.zeta" in report.norms
        assert result.paths == [tmp_path / "out" / "check.json"]
        written = json.loads(result.paths[0].read_text())
        assert written["config_hash"] == report.config_hash

    def test_inadmissible(self, tmp_path: Path) -> None:
        result = cmd_check(write_config(tmp_path, INADMISSIBLE))
        assert result.exit_code is ExitCode.FAILED
        assert not any(c.name.startswith("a1:") for c in result.report.checks)

    def test_no_json_requested(self, tmp_path: Path) -> None:
        result = cmd_check(write_config(tmp_path), formats=["csv"])
        assert result.paths == []


class TestBounds:
    def test_reference(self, tmp_path: Path) -> None:
        result = cmd_bounds(write_config(tmp_path), out_dir=tmp_path / "b")
        assert result.exit_code is ExitCode.OK
        assert result.report.R_inf >= 1.0
        written = json.loads((tmp_path / "b" / "bounds.json").read_text())
        assert written["rho"] == result.report.rho
        assert written["moser"]["kappa"][:2] == [0.0, result.report.moser.kappa[1]]

    def test_inadmissible_raises(self, tmp_path: Path) -> None:
        with pytest.raises(InadmissibleConfigError):
            cmd_bounds(write_config(tmp_path, INADMISSIBLE))


class TestSolve:
    def test_fast_run_writes_every_format(self, tmp_path: Path) -> None:
        result = cmd_solve(write_config(tmp_path))
        assert result.report.converged
        assert result.report.certification.passed
        assert result.exit_code is ExitCode.OK
        names = sorted(p.name for p in result.paths)
        assert names == ["profiles.csv", "profiles.svg", "solve.json", "stages.csv"]
        report = json.loads((tmp_path / "out" / "solve.json").read_text())
        assert len(report["stages"]) == 2
        assert len(report["truncation_sensitivity"]) == 2
        assert report["certification"]["bracketing"]["passed"]

    def test_repeated_runs_are_byte_identical(self, tmp_path: Path) -> None:
        path = write_config(tmp_path)
        first = cmd_solve(path, out_dir=tmp_path / "first")
        second = cmd_solve(path, out_dir=tmp_path / "second")
        assert [p.name for p in first.paths] == [p.name for p in second.paths]
        for a, b in zip(first.paths, second.paths, strict=True):
            assert a.read_bytes() == b.read_bytes(), a.name

    def test_forced_non_convergence(self, tmp_path: Path) -> None:
        result = cmd_solve(write_config(tmp_path, FORCED_FAILURE), formats=["json"])
        assert result.exit_code is ExitCode.NOT_CONVERGED
        report = json.loads(result.paths[0].read_text())
        assert report["converged"] is False
        assert report["certification"] is None
        assert report["stages"][0]["iterations"] == 5
        assert "did not converge" in report["error"]


class TestMain:
    def test_check_ok(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["check", "--config", str(write_config(tmp_path))]) == 0
        assert json.loads(capsys.readouterr().out)["overall"] is True

    def test_check_inadmissible(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["check", "--config", str(write_config(tmp_path, INADMISSIBLE))]) == 1
        assert json.loads(capsys.readouterr().out)["overall"] is False

    def test_bounds_inadmissible_prints_report(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        assert main(["bounds", "--config", str(write_config(tmp_path, INADMISSIBLE))]) == 1
        out = json.loads(capsys.readouterr().out)
        assert out["overall"] is False
        assert out["checks"]

    def test_missing_config(self, tmp_path: Path) -> None:
        assert main(["check", "--config", str(tmp_path / "absent.toml")]) == ExitCode.USAGE

    def test_bad_schedule(self, tmp_path: Path) -> None:
        path = write_config(tmp_path, {"eps_steps = 2": "eps_schedule = [0.1, 0.2]"})
        assert main(["solve", "--config", str(path)]) == ExitCode.USAGE

    def test_solve_not_converged(self, tmp_path: Path) -> None:
        path = write_config(tmp_path, FORCED_FAILURE)
        assert main(["solve", "--config", str(path), "--format", "json"]) == ExitCode.NOT_CONVERGED
        assert (tmp_path / "out" / "solve.json").is_file()

    def test_xi_outside_window(self, tmp_path: Path) -> None:
        path = write_config(tmp_path, {"kappa0 = 0.0": "kappa0 = 0.0\nxi1 = 1.4"})
        assert main(["bounds", "--config", str(path)]) == ExitCode.FAILED

    def test_sweep_unknown_values(self, tmp_path: Path) -> None:
        path = write_config(tmp_path)
        argv = ["sweep", "--config", str(path), "--parameter", "r_max", "--values", "four"]
        assert main(argv) == ExitCode.USAGE


@pytest.mark.slow
def test_reference_solve_certifies(tmp_path: Path) -> None:
    path = write_config(tmp_path, fast=False)
    assert main(["solve", "--config", str(path), "--out", str(tmp_path / "std")]) == ExitCode.OK
    assert (tmp_path / "std" / "profiles.svg").is_file()
