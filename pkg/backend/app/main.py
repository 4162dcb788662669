import argparse
import logging
import sys
from collections.abc import Sequence

from app.cli.commands import CommandResult, ExitCode, cmd_bounds, cmd_check, cmd_solve, cmd_sweep
from app.cli.run_config import ConfigError
from app.cli.sweep import SweepError, SweepParameter
from app.core.config import settings
from app.core.logging_config import configure_logging
from app.engines.bounds import BoundsError
from app.engines.fixedpoint import (
    ContinuationError,
    EnvelopeError,
    NonlinearityError,
    PicardError,
    ScheduleError,
)
from app.engines.hypotheses import HypothesisError, InadmissibleConfigError
from app.engines.plap_radial import PLapError
from app.engines.radial_grid import GridError
from app.engines.weights import WeightError

_logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "svg")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.PROJECT_NAME,
        description="Radial solver and a priori bounds for singular quasilinear systems.",
    )
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="TOML run config")
        p.add_argument("--out", default=None, help="Output directory (overrides [output])")

    for name, help_ in (
        ("check", "Validate exponents and weights"),
        ("bounds", "Compute rho, R and the constant ledger"),
        ("solve", "Run the eps-continuation and certify the result"),
    ):
        p = sub.add_parser(name, help=help_)
        common(p)
        p.add_argument(
            "--format",
            dest="formats",
            action="append",
            choices=FORMATS,
            default=None,
            help="Output format, repeatable (overrides [output].formats)",
        )

    p = sub.add_parser("sweep", help="Solve once per parameter value")
    common(p)
    p.add_argument("--parameter", required=True, choices=[s.value for s in SweepParameter])
    p.add_argument("--values", required=True, help="Comma-separated values, e.g. 4,8,16")
    p.add_argument("--jobs", type=int, default=1, help="Parallel sweep points")
    return parser


def _dispatch(args: argparse.Namespace) -> CommandResult:
    match args.command:
        case "check":
            return cmd_check(args.config, args.out, args.formats)
        case "bounds":
            return cmd_bounds(args.config, args.out, args.formats)
        case "solve":
            return cmd_solve(args.config, args.out, args.formats)
        case "sweep":
            return cmd_sweep(args.config, args.parameter, args.values, args.out, args.jobs)
    raise SweepError(f"unknown command {args.command!r}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        result = _dispatch(args)
    except (ConfigError, SweepError, ScheduleError, OSError) as e:
        _logger.error("usage_error", extra={"error": str(e)})
        return ExitCode.USAGE
    except InadmissibleConfigError as e:
        _logger.error("inadmissible_config", extra={"failed": e.report.failed()})
        if args.command in ("check", "bounds"):
            sys.stdout.write(e.report.model_dump_json(indent=2) + "\n")
        return ExitCode.FAILED
    except (
        HypothesisError,
        WeightError,
        BoundsError,
        GridError,
        PLapError,
        EnvelopeError,
        NonlinearityError,
        PicardError,
    ) as e:
        _logger.error("computation_rejected", extra={"error": str(e)})
        return ExitCode.FAILED
    except ContinuationError as e:
        _logger.error("not_converged", extra={"error": str(e)})
        return ExitCode.NOT_CONVERGED

    if result.report is not None and args.command in ("check", "bounds"):
        sys.stdout.write(result.report.model_dump_json(indent=2) + "\n")
    for path in result.paths:
        _logger.info("output_written", extra={"path": str(path)})
    return int(result.exit_code)


if __name__ == "__main__":
    sys.exit(main())
