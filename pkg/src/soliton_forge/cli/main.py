"""
soliton-forge command line.

    soliton-forge classify --model nil3
    soliton-forge classify --model sphere3 --deform 1:0.5
    soliton-forge deform --model sphere3 --deform 2:1 --negative
    soliton-forge solve problem.json --output-dir out/
    soliton-forge verify --profile-dir out/
    soliton-forge verify --model sphere3 --check phi-sectional
    soliton-forge report --model cigar --output-dir out/

Exit codes: 0 ok, 1 verification failed, 2 Neither, 3 empty profile,
64 usage or unknown model, 65 malformed data, 66 missing profile files.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from .. import __version__
from ..api import (
    CHECK_GROUPS,
    MIN_GRID_SIZE,
    DeformationInput,
    DegenerateTubeError,
    EmptyProfileError,
    NotAlmostContactError,
    NotASolitonError,
    OdeDomainError,
    PreconditionError,
    ProfileFilesNotFoundError,
    RunConfig,
    SolverError,
    UnknownModelError,
    ValidationError,
    classify_model,
    deform_model,
    report_model,
    report_profile,
    solve_problem,
    verify_model,
    verify_profile,
)
from ..core.config import GRID_SIZE, TOLERANCE_NAMES
from ..io.serializers import write_json

logger = logging.getLogger("soliton_forge.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NEITHER = 2
EXIT_EMPTY_PROFILE = 3
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66

DEFAULT_OUTPUT_DIR = Path("soliton-forge-output")


class UsageError(Exception):
    """Bad command-line usage (exit 64)."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exit 64 instead of 2."""

    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


# =============================================================================
# Argument parsing
# =============================================================================


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output-dir",
        type=Path,
        default=DEFAULT_OUTPUT_DIR,
        help=f"directory for JSON/CSV output (default: {DEFAULT_OUTPUT_DIR})",
    )
    common.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help=f"override a tolerance; names: {', '.join(TOLERANCE_NAMES)}",
    )
    common.add_argument(
        "--grid-size",
        type=int,
        default=GRID_SIZE,
        help=f"grid size for solve and residuals (>= {MIN_GRID_SIZE}, default {GRID_SIZE})",
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="soliton-forge",
        description="Kahler gradient Ricci solitons: deformations, soliton ODE and oracles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def deformation_options(p: argparse.ArgumentParser, required: bool) -> None:
        p.add_argument("--deform", metavar="H:F", required=required, help="(H, F)-deformation")
        p.add_argument(
            "--negative", action="store_true", help="use the -(H, F)-deformation (Phi -> -Phi)"
        )

    p = sub.add_parser("classify", parents=[common], help="classify an almost-contact model")
    p.add_argument("--model", required=True, help="sphere3 | sl2r | nil3 | hopf-hypersurface[:r]")
    deformation_options(p, required=False)

    p = sub.add_parser("deform", parents=[common], help="deform a model and report its Ricci")
    p.add_argument("--model", required=True)
    deformation_options(p, required=True)

    p = sub.add_parser("solve", parents=[common], help="solve a soliton problem document")
    p.add_argument("problem_file", type=Path, help="problem JSON (lambda, k, n, A, B, C, ...)")

    for name, text in (
        ("verify", "run a verification suite"),
        ("report", "write identity-suite JSON and fit tables"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        target = p.add_mutually_exclusive_group(required=True)
        target.add_argument("--model", help="named model")
        target.add_argument("--profile-dir", type=Path, help="directory written by 'solve'")
        if name == "verify":
            p.add_argument(
                "--check",
                action="append",
                choices=CHECK_GROUPS,
                default=[],
                help="restrict to a check group (repeatable)",
            )
    return parser


def parse_tolerances(items: Sequence[str]) -> dict[str, float]:
    """
    Parse ``NAME=VALUE`` strings (names case-insensitive).

    Raises:
        UsageError: On malformed items or unknown names
    """
    out: dict[str, float] = {}
    for item in items:
        name, sep, value = item.partition("=")
        key = name.strip().upper()
        if not sep or not key:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        if key not in TOLERANCE_NAMES:
            raise UsageError(f"unknown tolerance '{name}'. Valid: {', '.join(TOLERANCE_NAMES)}")
        try:
            out[key] = float(value)
        except ValueError as exc:
            raise UsageError(f"--tol {key}: not a number: {value!r}") from exc
        if not out[key] > 0:
            raise UsageError(f"--tol {key}: must be positive, got {value}")
    return out


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    Raises:
        UsageError: On invalid grid size, deformation or tolerance values
    """
    try:
        deformation = (
            DeformationInput.parse(args.deform, getattr(args, "negative", False))
            if getattr(args, "deform", None)
            else None
        )
        return RunConfig(
            command=args.command,
            output_dir=args.output_dir,
            model=getattr(args, "model", None),
            problem_file=getattr(args, "problem_file", None),
            profile_dir=getattr(args, "profile_dir", None),
            deformation=deformation,
            checks=tuple(getattr(args, "check", ()) or ()),
            tolerances=parse_tolerances(args.tol),
            grid_size=args.grid_size,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(name)s:%(levelname)s:%(message)s")


def _emit(config: RunConfig, filename: str, payload: dict) -> None:
    config.output_dir.mkdir(parents=True, exist_ok=True)
    write_json(config.output_dir / filename, payload)
    print(json.dumps(payload, indent=2, sort_keys=True, default=str))


# =============================================================================
# Commands
# =============================================================================


def cmd_classify(config: RunConfig) -> int:
    result = classify_model(config.model, config.deformation, tolerances=config.tolerances)
    _emit(config, "classification.json", result)
    return EXIT_NEITHER if result["tag"] == "Neither" else EXIT_OK


def cmd_deform(config: RunConfig) -> int:
    result = deform_model(config.model, config.deformation, tolerances=config.tolerances)
    _emit(config, "deformation.json", result)
    return EXIT_OK


def cmd_solve(config: RunConfig) -> int:
    summary = solve_problem(
        config.problem_file,
        config.output_dir,
        grid_size=config.grid_size,
        tolerances=config.tolerances,
    )
    print(json.dumps(summary, indent=2, sort_keys=True, default=str))
    if not summary["ok"]:
        logger.warning("residuals above tolerance: %s", ", ".join(summary["failing"]))
    return EXIT_OK if summary["ok"] else EXIT_FAILED


def cmd_verify(config: RunConfig) -> int:
    if config.profile_dir is not None:
        result = verify_profile(
            config.profile_dir, checks=config.checks, tolerances=config.tolerances
        )
    else:
        result = verify_model(config.model, checks=config.checks, tolerances=config.tolerances)
    _emit(config, "verification.json", result)
    if not result["passed"]:
        logger.warning("failing checks: %s", ", ".join(result["failing"]))
    return EXIT_OK if result["passed"] else EXIT_FAILED


def cmd_report(config: RunConfig) -> int:
    if config.profile_dir is not None:
        result = report_profile(config.profile_dir, config.output_dir, tolerances=config.tolerances)
    else:
        result = report_model(config.model, config.output_dir, tolerances=config.tolerances)
    print(json.dumps(result, indent=2, sort_keys=True, default=str))
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "deform": cmd_deform,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args)
        config = config_from_args(args)
        return COMMANDS[config.command](config)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EX_USAGE
    except (UnknownModelError, NotAlmostContactError) as exc:
        print(f"soliton-forge: {exc}", file=sys.stderr)
        return EX_USAGE
    except EmptyProfileError as exc:
        print(f"soliton-forge: empty profile: {exc}", file=sys.stderr)
        return EXIT_EMPTY_PROFILE
    except ProfileFilesNotFoundError as exc:
        print(f"soliton-forge: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except FileNotFoundError as exc:
        print(f"soliton-forge: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except NotASolitonError as exc:
        print(f"soliton-forge: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (
        ValidationError,
        OdeDomainError,
        PreconditionError,
        SolverError,
        DegenerateTubeError,
    ) as exc:
        print(f"soliton-forge: {exc}", file=sys.stderr)
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
