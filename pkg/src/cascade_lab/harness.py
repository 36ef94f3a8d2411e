"""Monte-Carlo sweeps over (population, signal strength) grids.

Cells are independent work items: the seed of replication r of cell (N, p)
is mix64(base_seed, cell_index) with cell_index enumerated populations-major,
then p, then replication.  Aggregation is keyed by cell and accumulated in
replication order, so results are byte-identical regardless of execution
order or worker count.

CSV schemas (UTF-8, LF, '.' decimal, 17 significant digits):

    cascade_outcomes.csv    population,p,subsidy,frac_correct,frac_incorrect,
                            frac_none,mean_onset,mean_subsidy_total
    subsidy_progression.csv population,p,t,mean_subsidy

Progression averages include zero-payment rounds (a per-round population
average); the conditional-on-payment diagnostic goes to a separate file,
subsidy_progression_conditional.csv, to keep the main schema fixed.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .analytics import dp_oracle
from .engine import Outcome, SimConfig, simulate_run
from .model import Reward, SignalStrength, WorldState
from .rng import mix64

PAPER_POPULATIONS = (10, 100, 1000)
PAPER_P_GRID = tuple((51 + 4 * k) / 100 for k in range(13))  # 0.51, 0.55, ..., 0.99
PAPER_REPLICATIONS = 100

OUTCOMES_CSV = "cascade_outcomes.csv"
PROGRESSION_CSV = "subsidy_progression.csv"
PROGRESSION_CONDITIONAL_CSV = "subsidy_progression_conditional.csv"
AGGREGATE_JSON = "aggregate_stats.json"

_OUTCOME_COLUMNS = (
    "population,p,subsidy,frac_correct,frac_incorrect,frac_none,mean_onset,mean_subsidy_total"
)
_PROGRESSION_COLUMNS = "population,p,t,mean_subsidy"
_CONDITIONAL_COLUMNS = "population,p,t,mean_subsidy_given_paid"


@dataclass(frozen=True)
class SweepConfig:
    populations: tuple[int, ...]
    p_values: tuple[SignalStrength, ...]
    replications: int
    base_seed: int = 0
    R: Reward = Reward(1.0)
    subsidy_enabled: bool = False
    output_dir: Optional[Path] = None

    def __post_init__(self):
        if not self.populations or not self.p_values:
            raise ValueError("populations and p_values must be non-empty")
        if any(n < 1 for n in self.populations):
            raise ValueError(f"populations must be positive, got {self.populations}")
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")


def paper_sweep_config(
    subsidy_enabled: bool,
    base_seed: int = 0,
    output_dir: Optional[Path] = None,
    reward: Reward = Reward(1.0),
) -> SweepConfig:
    """The experimental grid: N in {10, 100, 1000}, p = 0.51(0.04)0.99, 100 reps."""
    return SweepConfig(
        populations=PAPER_POPULATIONS,
        p_values=tuple(SignalStrength(p) for p in PAPER_P_GRID),
        replications=PAPER_REPLICATIONS,
        base_seed=base_seed,
        R=reward,
        subsidy_enabled=subsidy_enabled,
        output_dir=output_dir,
    )


@dataclass
class AggregateStats:
    """Per-(population, p) averages over all replications.

    `mean_onset` averages runs that entered a cascade (NaN if none did);
    `mean_subsidy_by_round` averages over every replication, zeros included;
    `mean_subsidy_given_paid` conditions on rounds where a payment happened
    (NaN where none did).  `replications` and `subsidy_enabled` make the
    stats self-describing for the oracle cross-check and CSV export.
    """

    population: int
    p: float
    frac_correct: float
    frac_incorrect: float
    frac_none: float
    mean_onset: float
    mean_subsidy_total: float
    mean_subsidy_by_round: tuple[float, ...]
    mean_subsidy_given_paid: tuple[float, ...]
    replications: int
    subsidy_enabled: bool


def _cell_stats(cfg: SweepConfig, i_pop: int, i_p: int) -> AggregateStats:
    population = cfg.populations[i_pop]
    strength = cfg.p_values[i_p]
    reps = cfg.replications
    first_index = (i_pop * len(cfg.p_values) + i_p) * reps

    n_correct = n_incorrect = n_none = 0
    onset_sum = 0.0
    n_onset = 0
    subsidy_total_sum = 0.0
    paid_sum = [0.0] * population
    paid_count = [0] * population

    for i_rep in range(reps):
        seed = mix64(cfg.base_seed, first_index + i_rep)
        rec = simulate_run(
            SimConfig(
                num_agents=population,
                p=strength,
                R=cfg.R,
                subsidy_enabled=cfg.subsidy_enabled,
                world=WorldState.A,
                seed=seed,
            )
        )
        if rec.outcome is Outcome.CORRECT_CASCADE:
            n_correct += 1
        elif rec.outcome is Outcome.INCORRECT_CASCADE:
            n_incorrect += 1
        else:
            n_none += 1
        if rec.onset_time is not None:
            onset_sum += rec.onset_time
            n_onset += 1
        subsidy_total_sum += rec.subsidy_total
        if rec.subsidy_rounds:
            for step in rec.steps:
                paid = step.subsidy_paid
                if paid > 0.0:
                    k = step.t - 1
                    paid_sum[k] += paid
                    paid_count[k] += 1

    nan = float("nan")
    return AggregateStats(
        population=population,
        p=strength.p,
        frac_correct=n_correct / reps,
        frac_incorrect=n_incorrect / reps,
        frac_none=n_none / reps,
        mean_onset=onset_sum / n_onset if n_onset else nan,
        mean_subsidy_total=subsidy_total_sum / reps,
        mean_subsidy_by_round=tuple(s / reps for s in paid_sum),
        mean_subsidy_given_paid=tuple(
            s / c if c else nan for s, c in zip(paid_sum, paid_count)
        ),
        replications=reps,
        subsidy_enabled=cfg.subsidy_enabled,
    )


def run_sweep(cfg: SweepConfig, threads: int = 1) -> list[AggregateStats]:
    """Execute every (population, p) cell; output independent of `threads`."""
    cells = [(i_pop, i_p) for i_pop in range(len(cfg.populations)) for i_p in range(len(cfg.p_values))]
    if threads <= 1 or len(cells) == 1:
        return [_cell_stats(cfg, i_pop, i_p) for i_pop, i_p in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda cell: _cell_stats(cfg, *cell), cells))


def _fmt(x: float) -> str:
    return format(x, ".17g")


def export_csv(stats: list[AggregateStats], out_dir: Path) -> list[Path]:
    """Write the outcome and progression tables plus the JSON mirror.

    Returns the written paths; raises OSError with path context on I/O
    failure.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc

    outcomes = out_dir / OUTCOMES_CSV
    progression = out_dir / PROGRESSION_CSV
    conditional = out_dir / PROGRESSION_CONDITIONAL_CSV
    mirror = out_dir / AGGREGATE_JSON

    try:
        with open(outcomes, "w", encoding="utf-8", newline="") as f:
            f.write(_OUTCOME_COLUMNS + "\n")
            for s in stats:
                subsidy = "on" if s.subsidy_enabled else "off"
                f.write(
                    f"{s.population},{_fmt(s.p)},{subsidy},{_fmt(s.frac_correct)},"
                    f"{_fmt(s.frac_incorrect)},{_fmt(s.frac_none)},{_fmt(s.mean_onset)},"
                    f"{_fmt(s.mean_subsidy_total)}\n"
                )
        with open(progression, "w", encoding="utf-8", newline="") as f:
            f.write(_PROGRESSION_COLUMNS + "\n")
            for s in stats:
                for t, value in enumerate(s.mean_subsidy_by_round, start=1):
                    f.write(f"{s.population},{_fmt(s.p)},{t},{_fmt(value)}\n")
        with open(conditional, "w", encoding="utf-8", newline="") as f:
            f.write(_CONDITIONAL_COLUMNS + "\n")
            for s in stats:
                for t, value in enumerate(s.mean_subsidy_given_paid, start=1):
                    f.write(f"{s.population},{_fmt(s.p)},{t},{_fmt(value)}\n")
        with open(mirror, "w", encoding="utf-8", newline="") as f:
            json.dump([_stats_to_dict(s) for s in stats], f, indent=2, allow_nan=False)
            f.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write sweep outputs under {out_dir}: {exc}") from exc
    return [outcomes, progression, conditional, mirror]


def _stats_to_dict(s: AggregateStats) -> dict:
    def scrub(x):
        return None if isinstance(x, float) and math.isnan(x) else x

    return {
        "population": s.population,
        "p": s.p,
        "frac_correct": s.frac_correct,
        "frac_incorrect": s.frac_incorrect,
        "frac_none": s.frac_none,
        "mean_onset": scrub(s.mean_onset),
        "mean_subsidy_total": s.mean_subsidy_total,
        "mean_subsidy_by_round": list(s.mean_subsidy_by_round),
        "mean_subsidy_given_paid": [scrub(v) for v in s.mean_subsidy_given_paid],
        "replications": s.replications,
        "subsidy_enabled": s.subsidy_enabled,
    }


def compare_to_oracle(stats: list[AggregateStats]) -> list[dict]:
    """z-scores of unsubsidized Monte-Carlo cells against the DP oracle.

    Requires >= 10^4 replications per cell so a |z| > 3 flag means something;
    underpowered or subsidized inputs are rejected.
    """
    for s in stats:
        if s.subsidy_enabled:
            raise ValueError("oracle comparison is defined for unsubsidized sweeps")
        if s.replications < 10_000:
            raise ValueError(
                f"cell (N={s.population}, p={s.p}) has {s.replications} replications; "
                "need >= 10000 for a meaningful comparison"
            )
    report = []
    for s in stats:
        strength = SignalStrength(s.p)
        oracle = dp_oracle(strength)
        w = oracle.prob_wrong_cascade
        z_wrong = (s.frac_incorrect - w) / math.sqrt(w * (1.0 - w) / s.replications)
        n_onset = round(s.replications * (s.frac_correct + s.frac_incorrect))
        if n_onset and not math.isnan(s.mean_onset):
            z_onset = (s.mean_onset - oracle.expected_onset) / (
                oracle.onset_std / math.sqrt(n_onset)
            )
        else:
            z_onset = float("inf")
        report.append(
            {
                "population": s.population,
                "p": s.p,
                "frac_incorrect": s.frac_incorrect,
                "oracle_wrong_cascade": w,
                "z_wrong_cascade": z_wrong,
                "mean_onset": s.mean_onset,
                "oracle_onset": oracle.expected_onset,
                "z_onset": z_onset,
                "flagged": abs(z_wrong) > 3 or abs(z_onset) > 3,
            }
        )
    return report
