"""Command-line interface.

Subcommands map one-to-one onto the planning activities: ``plan`` solves
and reports, ``pareto`` writes the trade-off curve, ``validate`` checks a
profile, ``synth`` generates one.  Primary output goes to stdout or the
requested files; diagnostics go to stderr.  Exit codes: 0 success,
1 infeasible problem, 2 input error, 3 internal failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from enum import IntEnum
from pathlib import Path

from .domain import COMPOSITIONS, CANONICAL_BITS, LevelSet, QuantLevel
from .ingest import (
    ProfileError,
    emit_pareto_csv,
    emit_profile,
    emit_report,
    emit_scatter_svg,
    parse_profile,
)
from .solver import (
    BudgetInfeasibleError,
    InfeasibleModelError,
    OracleCapExceededError,
    SolveRequest,
    pareto_front_dp,
    solve,
)
from .synth import SynthConfig, generate_profiles

__all__ = ["ExitStatus", "run", "main"]


class ExitStatus(IntEnum):
    OK = 0
    INFEASIBLE = 1
    INPUT_ERROR = 2
    INTERNAL_ERROR = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantplan",
        description="Plan per-model quantization levels for a multi-model inference pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="solve for one assignment and print a report")
    plan.add_argument("--profile", required=True, help="profile JSON path")
    pick = plan.add_mutually_exclusive_group(required=True)
    pick.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        help="accuracy/latency trade-off weight in [0, 1]; 0 favors accuracy",
    )
    pick.add_argument(
        "--budget-ms",
        dest="budget_ms",
        type=float,
        help="maximize accuracy under this pipeline latency budget",
    )
    plan.add_argument("--composition", choices=COMPOSITIONS, help="override accuracy composition")
    plan.add_argument("--format", choices=("json", "text"), default="text")
    plan.add_argument("--out", help="write the report here instead of stdout")

    pareto = sub.add_parser("pareto", help="enumerate the exact accuracy/latency front")
    pareto.add_argument("--profile", required=True)
    pareto.add_argument("--csv", help="CSV output path, or - for stdout")
    pareto.add_argument("--svg", help="scatter figure output path")

    validate = sub.add_parser("validate", help="parse and validate a profile")
    validate.add_argument("--profile", required=True)

    synth = sub.add_parser("synth", help="generate a synthetic profile")
    synth.add_argument("--models", type=int, required=True)
    synth.add_argument(
        "--levels",
        required=True,
        help="comma-separated level names; custom levels as name:bits",
    )
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--noise", type=float, default=0.0)
    synth.add_argument("--out", required=True)
    return parser


def _parse_level_tokens(spec: str) -> LevelSet:
    levels = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            raise ValueError("empty level name in --levels")
        if ":" in token:
            name, _, bits_text = token.partition(":")
            try:
                bits = int(bits_text)
            except ValueError:
                raise ValueError(f"bad bit-width in level token {token!r}") from None
        elif token in CANONICAL_BITS:
            name, bits = token, CANONICAL_BITS[token]
        else:
            raise ValueError(
                f"unknown level {token!r}; use one of {sorted(CANONICAL_BITS)} or name:bits"
            )
        levels.append(QuantLevel(name, bits))
    return LevelSet(tuple(levels))


def _read_profile(path: str):
    return parse_profile(Path(path).read_bytes())


def _write_bytes(path: str | None, payload: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(payload)


def _cmd_plan(args: argparse.Namespace) -> int:
    pipeline = _read_profile(args.profile)
    if args.composition is not None:
        pipeline = dataclasses.replace(pipeline, accuracy_composition=args.composition)
    if args.lam is not None:
        request = SolveRequest(pipeline=pipeline, mode="weighted", lam=args.lam)
    else:
        request = SolveRequest(pipeline=pipeline, mode="budget", budget_ms=args.budget_ms)
    result = solve(request)
    _write_bytes(args.out, emit_report(result, pipeline, format=args.format))
    return ExitStatus.OK


def _cmd_pareto(args: argparse.Namespace) -> int:
    pipeline = _read_profile(args.profile)
    front = pareto_front_dp(pipeline)
    wrote_any = False
    if args.csv is not None:
        _write_bytes(args.csv, emit_pareto_csv(front, pipeline))
        wrote_any = True
    if args.svg is not None:
        _write_bytes(args.svg, emit_scatter_svg(pipeline))
        print(f"wrote {args.svg}", file=sys.stderr)
        wrote_any = True
    if not wrote_any:
        _write_bytes("-", emit_pareto_csv(front, pipeline))
    return ExitStatus.OK


def _cmd_validate(args: argparse.Namespace) -> int:
    pipeline = _read_profile(args.profile)
    print(
        f"OK: {pipeline.name}: {pipeline.n_models} model(s), "
        f"{len(pipeline.level_set)} level(s), "
        f"{len(pipeline.thresholds)} threshold(s)"
    )
    return ExitStatus.OK


def _cmd_synth(args: argparse.Namespace) -> int:
    cfg = SynthConfig(
        n_models=args.models,
        level_set=_parse_level_tokens(args.levels),
        seed=args.seed,
        noise_amplitude=args.noise,
    )
    Path(args.out).write_bytes(emit_profile(generate_profiles(cfg)))
    print(f"wrote {args.out}", file=sys.stderr)
    return ExitStatus.OK


_COMMANDS = {
    "plan": _cmd_plan,
    "pareto": _cmd_pareto,
    "validate": _cmd_validate,
    "synth": _cmd_synth,
}


def run(argv: "list[str]") -> int:
    """Execute one CLI invocation; returns the process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and usage errors
        code = exc.code if exc.code is not None else 0
        return int(code) if isinstance(code, int) else ExitStatus.INPUT_ERROR
    try:
        return _COMMANDS[args.command](args)
    except (InfeasibleModelError, BudgetInfeasibleError, OracleCapExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.INFEASIBLE
    except (ProfileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.INPUT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.INPUT_ERROR
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return ExitStatus.INTERNAL_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
