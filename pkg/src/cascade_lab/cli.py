"""Command-line driver: single runs, sweeps, formula arbitration, validation.

stdout carries machine-readable payloads only (JSON or CSV); human
diagnostics go to stderr.  Exit codes: 0 success, 1 validation failure,
2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from .analytics import arbitrate
from .engine import SimConfig, run_record_to_json, simulate_run
from .harness import (
    PAPER_P_GRID,
    SweepConfig,
    export_csv,
    paper_sweep_config,
    run_sweep,
)
from .model import Reward, SignalStrength, WorldState
from .validation import run_all

_MASK64 = (1 << 64) - 1

ORACLE_COLUMNS = (
    "p,"
    "wrong_cascade_paper,wrong_cascade_exact,wrong_cascade_oracle,"
    "wrong_cascade_agree_paper,wrong_cascade_agree_exact,"
    "expected_onset_paper,expected_onset_exact,expected_onset_oracle,"
    "expected_onset_agree_paper,expected_onset_agree_exact,"
    "expected_escape_rounds,escape_rounds_oracle,escape_rounds_agree,"
    "expected_budget_bound,expected_budget_oracle,budget_within_bound"
)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _parse_strength(parser: argparse.ArgumentParser, value: float) -> SignalStrength:
    try:
        return SignalStrength(value)
    except ValueError as exc:
        parser.error(str(exc))  # exits 2


def _parse_reward(parser: argparse.ArgumentParser, value: float) -> Reward:
    try:
        reward = Reward(value)
    except ValueError as exc:
        parser.error(str(exc))
    if reward.R <= 0:
        parser.error(f"reward must be positive, got {value}")
    return reward


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _default_threads() -> int:
    env = os.environ.get("CASCADE_LAB_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascade-lab",
        description="Sequential decision cascades: simulation, subsidy intervention, analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser(
        "run",
        help="simulate one population and print its trajectory as JSON",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    run.add_argument("--p", type=float, required=True, help="signal strength, in (0.5, 1.0)")
    run.add_argument("--agents", type=int, required=True, help="number of sequential agents")
    run.add_argument("--reward", type=float, default=1.0, help="payoff R for the correct action")
    run.add_argument("--subsidy", choices=("on", "off"), default="off", help="intervention switch")
    run.add_argument("--seed", type=int, default=0, help="64-bit stream seed")
    run.add_argument("--world", choices=("A", "B"), default="A", help="which action is truly better")
    run.add_argument("--out", type=Path, default=None, help="write JSON here instead of stdout")

    sweep = sub.add_parser(
        "sweep",
        help="Monte-Carlo sweep over (population, p) cells; writes CSV tables",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sweep.add_argument("--config", type=Path, default=None, help="JSON file mirroring SweepConfig")
    sweep.add_argument("--paper-defaults", action="store_true",
                       help="use the experimental grid: N in {10,100,1000}, p = 0.51..0.99, 100 reps")
    sweep.add_argument("--populations", type=_int_list, default=None, help="comma-separated sizes")
    sweep.add_argument("--p-values", type=_float_list, default=None, help="comma-separated strengths")
    sweep.add_argument("--reps", type=int, default=100, help="replications per cell")
    sweep.add_argument("--seed", type=int, default=0, help="base seed; cells derive from it")
    sweep.add_argument("--reward", type=float, default=1.0, help="payoff R")
    sweep.add_argument("--subsidy", choices=("on", "off"), default="off", help="intervention switch")
    sweep.add_argument("--out-dir", type=Path, default=None,
                       help="output directory (default sweep_output)")
    sweep.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker threads; never affects output bytes "
                            "(env CASCADE_LAB_THREADS)")

    oracle = sub.add_parser(
        "oracle",
        help="arbitrate published formulas against the exact DP oracle; CSV output",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    oracle.add_argument("--p-values", type=_float_list,
                        default=list(PAPER_P_GRID), help="comma-separated strengths")
    oracle.add_argument("--reward", type=float, default=1.0, help="payoff R")
    oracle.add_argument("--out", type=Path, default=None, help="write CSV here instead of stdout")

    validate = sub.add_parser(
        "validate",
        help="run the correctness suites; exit 0 iff all pass",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    validate.add_argument("--quick", action="store_true", help="reduced grids, same checks")

    return parser


def _cmd_run(parser, args) -> int:
    strength = _parse_strength(parser, args.p)
    reward = _parse_reward(parser, args.reward)
    if args.agents < 1:
        parser.error(f"need at least one agent, got {args.agents}")
    cfg = SimConfig(
        num_agents=args.agents,
        p=strength,
        R=reward,
        subsidy_enabled=args.subsidy == "on",
        world=WorldState(args.world),
        seed=args.seed & _MASK64,
    )
    rec = simulate_run(cfg)
    payload = run_record_to_json(rec)
    print(
        f"outcome={rec.outcome.value} onset={rec.onset_time} "
        f"subsidy_total={rec.subsidy_total:.6g} subsidy_rounds={rec.subsidy_rounds}",
        file=sys.stderr,
    )
    if args.out is not None:
        try:
            args.out.write_text(payload + "\n", encoding="utf-8")
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return 3
        print(str(args.out))
    else:
        print(payload)
    return 0


def _sweep_config_from_json(parser, path: Path) -> SweepConfig:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read sweep config {path}: {exc}")
    try:
        return SweepConfig(
            populations=tuple(raw["populations"]),
            p_values=tuple(SignalStrength(v) for v in raw["p_values"]),
            replications=raw["replications"],
            base_seed=raw.get("base_seed", 0),
            R=Reward(raw.get("R", 1.0)),
            subsidy_enabled=raw.get("subsidy_enabled", False),
            output_dir=Path(raw["output_dir"]) if raw.get("output_dir") else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        parser.error(f"invalid sweep config {path}: {exc!r}")


def _cmd_sweep(parser, args) -> int:
    if args.config is not None and args.paper_defaults:
        parser.error("--config and --paper-defaults are mutually exclusive")
    if args.config is not None:
        cfg = _sweep_config_from_json(parser, args.config)
    elif args.paper_defaults:
        cfg = paper_sweep_config(
            subsidy_enabled=args.subsidy == "on",
            base_seed=args.seed & _MASK64,
            reward=_parse_reward(parser, args.reward),
        )
    else:
        populations = args.populations or [10, 100, 1000]
        p_values = args.p_values or list(PAPER_P_GRID)
        strengths = tuple(_parse_strength(parser, v) for v in p_values)
        try:
            cfg = SweepConfig(
                populations=tuple(populations),
                p_values=strengths,
                replications=args.reps,
                base_seed=args.seed & _MASK64,
                R=_parse_reward(parser, args.reward),
                subsidy_enabled=args.subsidy == "on",
            )
        except ValueError as exc:
            parser.error(str(exc))
    out_dir = args.out_dir or cfg.output_dir or Path("sweep_output")
    if args.threads < 1:
        parser.error(f"--threads must be >= 1, got {args.threads}")
    stats = run_sweep(cfg, threads=args.threads)
    try:
        paths = export_csv(stats, out_dir)
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 3
    for path in paths:
        print(str(path))
    return 0


def _cmd_oracle(parser, args) -> int:
    reward = _parse_reward(parser, args.reward)
    strengths = [_parse_strength(parser, v) for v in args.p_values]
    lines = [ORACLE_COLUMNS]
    for strength in strengths:
        row = arbitrate(strength, reward)
        wc, on, esc = row.wrong_cascade, row.expected_onset, row.escape_rounds
        lines.append(
            ",".join(
                [
                    _fmt(row.p),
                    _fmt(wc.paper_value), _fmt(wc.rederived_value), _fmt(wc.oracle_value),
                    str(wc.agree_paper).lower(), str(wc.agree_rederived).lower(),
                    _fmt(on.paper_value), _fmt(on.rederived_value), _fmt(on.oracle_value),
                    str(on.agree_paper).lower(), str(on.agree_rederived).lower(),
                    _fmt(esc.paper_value), _fmt(esc.oracle_value),
                    str(esc.agree_rederived).lower(),
                    _fmt(row.budget_bound), _fmt(row.budget_oracle),
                    str(row.budget_within_bound).lower(),
                ]
            )
        )
    payload = "\n".join(lines) + "\n"
    if args.out is not None:
        try:
            args.out.write_text(payload, encoding="utf-8")
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return 3
        print(str(args.out))
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_validate(args) -> int:
    results = run_all(quick=args.quick)
    for res in results:
        print(json.dumps(asdict(res), separators=(",", ":")))
    failures = [res.name for res in results if not res.passed]
    if failures:
        print("FAILED: " + ", ".join(failures), file=sys.stderr)
        return 1
    print(f"all {len(results)} suites passed", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(parser, args)
    if args.command == "sweep":
        return _cmd_sweep(parser, args)
    if args.command == "oracle":
        return _cmd_oracle(parser, args)
    return _cmd_validate(args)


def entrypoint():
    raise SystemExit(main())
