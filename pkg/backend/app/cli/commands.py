"""
The four subcommands. Each returns a :class:`CommandResult`; mapping of
exceptions to exit codes happens once, in ``app.main``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from enum import IntEnum
from pathlib import Path
from typing import Any, NamedTuple

from pydantic import BaseModel

from app.cli.reporting import (
    write_json,
    write_profiles_csv,
    write_profiles_svg,
    write_stages_csv,
    write_sweep_csv,
)
from app.cli.run_config import RunConfig, config_hash, load_run_config
from app.cli.runner import solve_run
from app.cli.sweep import run_sweep
from app.core.logging_config import bind_run_context
from app.engines.bounds import compute_bounds, sobolev_constants
from app.engines.hypotheses import (
    InadmissibleConfigError,
    derive_exponents,
    require_admissible,
    validate,
)
from app.engines.weights import WeightNorms, check_Ha, weight_norms
from app.schemas_report import ValidationReport

_log = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    FAILED = 1
    USAGE = 2
    NOT_CONVERGED = 3


class CommandResult(NamedTuple):
    exit_code: ExitCode
    report: BaseModel | None
    paths: list[Path]


def _prepare(
    command: str, config_path: str | Path, out_dir: str | Path | None, formats: Sequence[str] | None
) -> tuple[RunConfig, str]:
    run = load_run_config(config_path)
    update: dict[str, Any] = {}
    if out_dir is not None:
        update["directory"] = Path(out_dir)
    if formats:
        update["formats"] = list(formats)
    if update:
        run = run.model_copy(update={"output": run.output.model_copy(update=update)})
    digest = config_hash(run)
    bind_run_context(command=command, config_hash=digest[:12])
    return run, digest


def _output_dir(run: RunConfig) -> Path:
    out = run.output.directory
    out.mkdir(parents=True, exist_ok=True)
    return out


def _weight_reports(run: RunConfig, *, require: bool) -> list[ValidationReport]:
    grid = run.build_grid()
    derived = derive_exponents(run.exponents)
    xis = (
        run.bounds.xi1 if run.bounds.xi1 is not None else derived.xi_default(1),
        run.bounds.xi2 if run.bounds.xi2 is not None else derived.xi_default(2),
    )
    reports = []
    for side, spec, xi in ((1, run.weight.a1, xis[0]), (2, run.weight.a2, xis[1])):
        report = check_Ha(spec, run.exponents, grid, side=side, xi=xi)
        if require and not report.overall:
            raise InadmissibleConfigError(report, what=f"weight a{side}")
        reports.append(report)
    return reports


def cmd_check(
    config_path: str | Path,
    out_dir: str | Path | None = None,
    formats: Sequence[str] | None = None,
) -> CommandResult:
    """Admissibility of the exponents and of both weights; exit 0 iff all hold."""
    run, digest = _prepare("check", config_path, out_dir, formats)
    report = validate(run.exponents)
    if report.overall:
        for side, weight_report in enumerate(_weight_reports(run, require=False), start=1):
            report.checks += [
                c.model_copy(update={"name": f"a{side}: {c.name}"}) for c in weight_report.checks
            ]
            report.norms |= {f"a{side}.{k}": v for k, v in weight_report.norms.items()}
    report.config_hash = digest

    paths = []
    if "json" in run.output.formats:
        paths.append(write_json(report, _output_dir(run) / "check.json"))
    if report.overall:
        _log.info("check_passed")
        return CommandResult(ExitCode.OK, report, paths)
    _log.warning("check_failed", extra={"failed": report.failed()})
    return CommandResult(ExitCode.FAILED, report, paths)


def cmd_bounds(
    config_path: str | Path,
    out_dir: str | Path | None = None,
    formats: Sequence[str] | None = None,
) -> CommandResult:
    """rho, R and the full constant ledger.

    Raises:
        InadmissibleConfigError: before any constant is computed.
        BoundsError: xi out of range and similar.
    """
    run, digest = _prepare("bounds", config_path, out_dir, formats)
    cfg = run.exponents
    require_admissible(cfg)
    norms: list[WeightNorms] = [weight_norms(r) for r in _weight_reports(run, require=True)]
    report = compute_bounds(
        cfg,
        norms[0],
        norms[1],
        sobolev_constants(cfg),
        xi1=run.bounds.xi1,
        xi2=run.bounds.xi2,
        kappa0=run.bounds.kappa0,
        tail_tol=run.bounds.tail_tol,
        convention=run.bounds.convention,
    ).model_copy(update={"config_hash": digest})

    paths = []
    if "json" in run.output.formats:
        paths.append(write_json(report, _output_dir(run) / "bounds.json"))
    return CommandResult(ExitCode.OK, report, paths)


def cmd_solve(
    config_path: str | Path,
    out_dir: str | Path | None = None,
    formats: Sequence[str] | None = None,
) -> CommandResult:
    """Continuation, certification, and the report / profile files.

    Exit code 3 when a stage does not converge (partial outputs are written),
    1 when certification fails, 0 otherwise.
    """
    run, digest = _prepare("solve", config_path, out_dir, formats)
    out = _output_dir(run)
    outcome = solve_run(run, digest)
    report = outcome.report

    env = outcome.envelopes
    fields = {
        "u": outcome.state.u,
        "v": outcome.state.v,
        "u_lo": env.u_lo,
        "u_hi": env.u_hi,
        "v_lo": env.v_lo,
        "v_hi": env.v_hi,
    }
    paths = []
    formats_ = run.output.formats
    if "json" in formats_:
        paths.append(write_json(report, out / "solve.json"))
    if "csv" in formats_:
        paths.append(write_stages_csv(report.stages, out / "stages.csv"))
        paths.append(write_profiles_csv(fields, out / "profiles.csv"))
    if "svg" in formats_:
        title = f"eps = {outcome.state.eps:.6g}"
        paths.append(write_profiles_svg(fields, out / "profiles.svg", title))

    if not report.converged:
        return CommandResult(ExitCode.NOT_CONVERGED, report, paths)
    if not outcome.certified:
        return CommandResult(ExitCode.FAILED, report, paths)
    return CommandResult(ExitCode.OK, report, paths)


def cmd_sweep(
    config_path: str | Path,
    parameter: str,
    values: str | Sequence[float],
    out_dir: str | Path | None = None,
    jobs: int = 1,
) -> CommandResult:
    """One solve per value, aggregated into ``sweep.csv``.

    Exit code 3 if any point did not converge, 1 if any point is uncertified.

    Raises:
        SweepError: unknown parameter or empty values.
    """
    run, _ = _prepare("sweep", config_path, out_dir, None)
    rows = run_sweep(run, parameter, values, jobs)
    path = write_sweep_csv(rows, _output_dir(run) / "sweep.csv")

    if not all(r.converged for r in rows):
        code = ExitCode.NOT_CONVERGED
    elif not all(r.certified for r in rows):
        code = ExitCode.FAILED
    else:
        code = ExitCode.OK
    return CommandResult(code, None, [path])
