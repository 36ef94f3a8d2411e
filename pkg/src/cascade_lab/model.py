"""Two-alternative Bayesian signal model and the per-agent decision rules.

Action A is the better option by convention.  Agents share a uniform prior
over which of the two worlds holds and receive conditionally independent
binary signals of strength p in (1/2, 1).  Because ties are broken in favor
of the private signal, the posterior depends on the observed history only
through d = nA - nB, the net count of signal-following choices: one net
B-choice multiplies the odds against world A by (1-p)/p.  Posteriors are
therefore computed from that integer, which keeps the indifference point an
exact integer condition instead of a floating-point coincidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .walk import InformativeCounts


class WorldState(Enum):
    """Which of the two actions is actually better."""

    A = "A"
    B = "B"


class Signal(Enum):
    """A private, noisy recommendation of one action."""

    A = "A"
    B = "B"


class Action(Enum):
    """The choice an agent commits to publicly."""

    A = "A"
    B = "B"


@dataclass(frozen=True)
class SignalStrength:
    """Probability that a private signal names the better action.

    Must lie strictly inside (1/2, 1): at 1/2 signals carry no information
    and at 1 the subsidy interval degenerates (division by 1-p).
    `odds_step` is the likelihood ratio (1-p)/p contributed by one net
    misleading step; it and its log are precomputed since every posterior
    call needs them.
    """

    p: float
    odds_step: float = field(init=False, repr=False, compare=False)
    log_odds_step: float = field(init=False, repr=False, compare=False)
    _safe_exponent: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, (int, float)):
            raise TypeError(f"signal strength must be a real number, got {type(self.p).__name__}")
        if not 0.5 < self.p < 1.0:
            raise ValueError(
                f"signal strength must lie strictly inside (0.5, 1.0), got {self.p}"
            )
        odds = (1.0 - self.p) / self.p
        log_odds = math.log(odds)  # strictly negative on the valid domain
        object.__setattr__(self, "odds_step", odds)
        object.__setattr__(self, "log_odds_step", log_odds)
        object.__setattr__(self, "_safe_exponent", min(10**9, int(700.0 / -log_odds)))


@dataclass(frozen=True)
class Reward:
    """Net payoff for choosing the better action, in utility units."""

    R: float

    def __post_init__(self):
        if not math.isfinite(self.R) or self.R < 0:
            raise ValueError(f"reward must be finite and nonnegative, got {self.R}")


@dataclass(frozen=True)
class Belief:
    """Posterior mass over the two worlds; must be a proper distribution."""

    prob_world_A: float
    prob_world_B: float

    def __post_init__(self):
        for v in (self.prob_world_A, self.prob_world_B):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"belief component {v} outside [0, 1]")
        if abs(self.prob_world_A + self.prob_world_B - 1.0) > 1e-12:
            raise ValueError(
                f"belief does not normalize: {self.prob_world_A} + {self.prob_world_B}"
            )


def signal_likelihood(s: Signal, w: WorldState, strength: SignalStrength) -> float:
    """Chance of observing signal s when w is the true world."""
    return strength.p if s.value == w.value else 1.0 - strength.p


def sample_signal(w: WorldState, strength: SignalStrength, rng) -> Signal:
    """Draw one private signal; consumes exactly one draw from rng.

    The signal names the true world's action iff the draw falls below p.
    """
    correct = rng.next_unit() < strength.p
    if w is WorldState.A:
        return Signal.A if correct else Signal.B
    return Signal.B if correct else Signal.A


def _odds_against_A(strength: SignalStrength, exponent: int) -> float:
    """((1-p)/p) ** exponent, saturating instead of overflowing.

    Returns math.inf when the true value exceeds float range; the caller maps
    that to a zero posterior on world A.  The direct power is kept whenever
    it is representable so small rational cases stay bit-faithful.
    """
    if -strength._safe_exponent <= exponent <= strength._safe_exponent:
        return strength.odds_step**exponent
    t = exponent * strength.log_odds_step
    if t > 700.0:
        return math.inf
    if t < -745.0:
        return 0.0
    return math.exp(t)


def _posterior_pair(strength: SignalStrength, exponent: int) -> tuple[float, float]:
    """(Pr world A, Pr world B) for odds-against-A exponent d + sigma."""
    odds = _odds_against_A(strength, exponent)
    if odds == math.inf:
        return 0.0, 1.0
    pa = 1.0 / (1.0 + odds)
    return pa, odds / (1.0 + odds)


def posterior_world_A(s: Signal, counts: "InformativeCounts", strength: SignalStrength) -> Belief:
    """Posterior over worlds given the informative history and one's own signal.

    With d = nA - nB, the odds against world A after also seeing signal s are
    ((1-p)/p) ** (d + sigma), sigma = +1 for signal A and -1 for signal B.
    """
    sigma = 1 if s is Signal.A else -1
    pa, pb = _posterior_pair(strength, counts.d + sigma)
    return Belief(pa, pb)


def decide_unsubsidized(s: Signal, counts: "InformativeCounts", strength: SignalStrength) -> Action:
    """Decision rule with no payment on the table.

    Pure integer rule: inside a cascade region (|d| >= 2) follow the herd,
    otherwise follow the signal.  Agrees with thresholding the posterior at
    1/2 with ties resolved toward the signal; the walk-equivalence check
    verifies that against a full Bayes recursion.
    """
    d = counts.d
    if d >= 2:
        return Action.A
    if d <= -2:
        return Action.B
    return Action.A if s is Signal.A else Action.B


def decide_subsidized(
    s: Signal,
    counts: "InformativeCounts",
    strength: SignalStrength,
    reward: Reward,
    r: float,
) -> Action:
    """Decision rule when a payment r is offered for choosing action A.

    Compares u_A = r + R * Pr(world A | s, history) against
    u_B = R * Pr(world B | s, history).  Exact indifference is part of the
    design (the quoted payment sits on the signal-A agent's indifference
    point), so equality within eps = 1e-9 * max(R, 1) counts as a tie and
    ties follow the signal.
    """
    if r < 0:
        raise ValueError(f"subsidy must be nonnegative, got {r}")
    pa, pb = _posterior_pair(strength, counts.d + (1 if s is Signal.A else -1))
    u_a = r + reward.R * pa
    u_b = reward.R * pb
    eps = 1e-9 * max(reward.R, 1.0)
    if u_a > u_b + eps:
        return Action.A
    if u_b > u_a + eps:
        return Action.B
    return Action.A if s is Signal.A else Action.B
