"""One sequential population run, with or without the subsidy intervention.

A single loop covers both regimes: the subsidy (when enabled) activates
automatically whenever the walk sits in an incorrect cascade and switches
itself off everywhere else, so a run reproduces free herding, trap entry,
subsidized escape, and post-escape stability end to end.

Runs are pure functions of their configuration.  The round-t signal draw is
mix64(seed, t), so a trajectory is reproducible independently of scheduling,
and identical configurations serialize to identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .model import (
    Action,
    Reward,
    Signal,
    SignalStrength,
    WorldState,
    decide_subsidized,
    sample_signal,
)
from .rng import CounterRng
from .subsidy import subsidy_amount
from .walk import InformativeCounts, Phase, is_informative, phase, update_counts


class Outcome(Enum):
    CORRECT_CASCADE = "CorrectCascade"
    INCORRECT_CASCADE = "IncorrectCascade"
    NO_CASCADE = "NoCascade"


_PHASE_OUTCOME = {
    Phase.FOLLOW_SIGNAL: Outcome.NO_CASCADE,
    Phase.CORRECT_CASCADE: Outcome.CORRECT_CASCADE,
    Phase.INCORRECT_CASCADE: Outcome.INCORRECT_CASCADE,
}


@dataclass(frozen=True)
class SimConfig:
    """Everything that determines a run, including the random stream.

    `initial_counts` defaults to the empty history; forcing it to a trap
    state (e.g. nB = 2) starts the run inside an incorrect cascade, which is
    how escape times and budgets are measured in isolation.
    """

    num_agents: int
    p: SignalStrength
    R: Reward = Reward(1.0)
    subsidy_enabled: bool = False
    world: WorldState = WorldState.A
    seed: int = 0
    initial_counts: InformativeCounts = field(default_factory=InformativeCounts)

    def __post_init__(self):
        if self.num_agents < 1:
            raise ValueError(f"need at least one agent, got {self.num_agents}")


@dataclass(slots=True)
class StepRecord:
    """One round: what the agent saw, was offered, and did.

    `subsidy_paid` is the amount quoted for the round (spent whenever the
    subsidy is live, matching the round-based budget accounting).
    """

    t: int
    signal: Signal
    action: Action
    phase_before: Phase
    subsidy_paid: float
    d_after: int


@dataclass
class RunRecord:
    """Full trajectory of one population plus its summary statistics."""

    config: SimConfig
    steps: tuple
    outcome: Outcome
    onset_time: Optional[int]  # 0 when the run starts inside a cascade
    subsidy_total: float
    subsidy_rounds: int
    subsidy_start: Optional[int]


def simulate_run(cfg: SimConfig) -> RunRecord:
    """Run `cfg.num_agents` sequential decisions and record every round."""
    strength = cfg.p
    reward = cfg.R
    world = cfg.world
    subsidized = cfg.subsidy_enabled
    rng = CounterRng(cfg.seed)
    counts = cfg.initial_counts

    steps = []
    onset: Optional[int] = 0 if phase(counts) is not Phase.FOLLOW_SIGNAL else None
    subsidy_total = 0.0
    subsidy_rounds = 0
    subsidy_start: Optional[int] = None

    for t in range(1, cfg.num_agents + 1):
        ph = phase(counts)
        sig = sample_signal(world, strength, rng)
        if subsidized and ph is Phase.INCORRECT_CASCADE:
            r = subsidy_amount(counts, strength, reward)
        else:
            r = 0.0
        act = decide_subsidized(sig, counts, strength, reward, r)
        counts = update_counts(counts, act, is_informative(ph, r > 0.0))
        d = counts.d
        if r > 0.0:
            subsidy_total += r
            subsidy_rounds += 1
            if subsidy_start is None:
                subsidy_start = t
        if onset is None and (d >= 2 or d <= -2):
            onset = t
        steps.append(StepRecord(t, sig, act, ph, r, d))

    return RunRecord(
        config=cfg,
        steps=tuple(steps),
        outcome=_PHASE_OUTCOME[phase(counts)],
        onset_time=onset,
        subsidy_total=subsidy_total,
        subsidy_rounds=subsidy_rounds,
        subsidy_start=subsidy_start,
    )


def classify_outcome(rec: RunRecord) -> Outcome:
    """Map the final walk position to the run outcome."""
    final = rec.steps[-1].d_after if rec.steps else rec.config.initial_counts.d
    if final >= 2:
        return Outcome.CORRECT_CASCADE
    if final <= -2:
        return Outcome.INCORRECT_CASCADE
    return Outcome.NO_CASCADE


def config_to_dict(cfg: SimConfig) -> dict:
    return {
        "num_agents": cfg.num_agents,
        "p": cfg.p.p,
        "R": cfg.R.R,
        "subsidy_enabled": cfg.subsidy_enabled,
        "world": cfg.world.value,
        "seed": cfg.seed,
        "initial_counts": {"nA": cfg.initial_counts.nA, "nB": cfg.initial_counts.nB},
    }


def run_record_to_dict(rec: RunRecord) -> dict:
    """JSON-ready view with field names matching the record definitions."""
    return {
        "config": config_to_dict(rec.config),
        "steps": [
            {
                "t": s.t,
                "signal": s.signal.value,
                "action": s.action.value,
                "phase_before": s.phase_before.value,
                "subsidy_paid": s.subsidy_paid,
                "d_after": s.d_after,
            }
            for s in rec.steps
        ],
        "outcome": rec.outcome.value,
        "onset_time": rec.onset_time,
        "subsidy_total": rec.subsidy_total,
        "subsidy_rounds": rec.subsidy_rounds,
        "subsidy_start": rec.subsidy_start,
    }


def run_record_to_json(rec: RunRecord) -> str:
    """Deterministic serialization: fixed key order, no whitespace variance."""
    payload = run_record_to_dict(rec)
    if not math.isfinite(rec.subsidy_total):  # defensive; payments are < R each
        raise ValueError("subsidy total is not finite")
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)
