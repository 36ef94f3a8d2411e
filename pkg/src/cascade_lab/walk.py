"""Informative-count walk state and phase classification.

The pair (nA, nB) counts decisions made by agents who acted on their private
signal; everything the population can infer from history is a function of
it.  The difference d = nA - nB performs a random walk: agents follow their
signals while |d| <= 1, herd onto A once d >= 2 and onto B once d <= -2.
The d <= -2 region is treated as a region rather than a single boundary
state because a subsidized walk can dip below -2 before escaping.

State is a value type and transitions are pure functions; the engine owns
all mutation, which keeps exhaustive enumeration in tests trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Action


class Phase(Enum):
    FOLLOW_SIGNAL = "FollowSignal"
    CORRECT_CASCADE = "CorrectCascade"
    INCORRECT_CASCADE = "IncorrectCascade"


@dataclass(frozen=True, slots=True)
class InformativeCounts:
    """Counts of signal-following choices of A and of B."""

    nA: int = 0
    nB: int = 0

    def __post_init__(self):
        if self.nA < 0 or self.nB < 0:
            raise ValueError(f"counts must be nonnegative, got ({self.nA}, {self.nB})")

    @property
    def d(self) -> int:
        return self.nA - self.nB


def phase(counts: InformativeCounts) -> Phase:
    """Classify the process phase from the walk position."""
    d = counts.d
    if d >= 2:
        return Phase.CORRECT_CASCADE
    if d <= -2:
        return Phase.INCORRECT_CASCADE
    return Phase.FOLLOW_SIGNAL


def update_counts(counts: InformativeCounts, a: Action, acted_on_signal: bool) -> InformativeCounts:
    """Record one decision; only signal-following decisions carry information.

    `acted_on_signal` must be True iff the acting agent's choice depended on
    their private signal (free phase, or subsidized inside an incorrect
    cascade).
    """
    if not acted_on_signal:
        return counts
    if a is Action.A:
        return InformativeCounts(counts.nA + 1, counts.nB)
    return InformativeCounts(counts.nA, counts.nB + 1)


def is_informative(ph: Phase, subsidy_active: bool) -> bool:
    """Whether the upcoming decision will reveal the agent's signal.

    A live subsidy makes signal-following incentive-compatible inside an
    incorrect cascade; the engine guarantees a subsidy is never active in any
    other phase.
    """
    if subsidy_active and ph is not Phase.INCORRECT_CASCADE:
        raise ValueError(f"subsidy active outside an incorrect cascade (phase {ph.value})")
    return ph is Phase.FOLLOW_SIGNAL or subsidy_active
