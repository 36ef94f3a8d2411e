"""Payment rule that makes signal-following incentive-compatible in a trap.

The informative history's likelihood ratio g = Pr(H | world B) / Pr(H | world A)
equals ((1-p)/p) ** d.  Writing q = (1-p)/p, a payment r for choosing A keeps
both signal types truthful exactly when

    L = R (q g - 1) / (1 + q g)   <=   r   <=   U = R (g - q) / (g + q).

L makes the signal-A agent indifferent (and the tie convention keeps them on
their signal); any r below U leaves the signal-B agent strictly on B.  The
scheme pays L, the cheapest admissible amount, and only while d <= -2.

Note the published form of this interval, R(g-1)/(1+qg) <= r <= R(g-1)/(1/q+g),
is empty for g > 1 (e.g. p = 2/3, g = 4 gives [R, R/2]); its posterior pair
does not sum to one.  The bounds above come from re-normalizing the same
Bayes expansion and are verified behaviorally against the decision rule; see
README "Published formulas vs. exact values".

Both endpoints equal R * tanh of half a log-odds:

    L = R tanh(((d + 1) / 2) ln q),    U = R tanh(((d - 1) / 2) ln q),

which is how deep trap states (|d| beyond direct float range) are evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Reward, SignalStrength
from .walk import InformativeCounts, Phase, phase


@dataclass(frozen=True)
class SubsidyQuote:
    """One round's incentive computation: ratio, admissible interval, payment."""

    likelihood_ratio: float
    lower: float
    upper: float
    payment: float


def likelihood_ratio(counts: InformativeCounts, strength: SignalStrength) -> float:
    """Pr(history | world B) / Pr(history | world A) over informative rounds.

    Equals (p/(1-p)) ** (nB - nA); exceeds 1 exactly when the history leans
    toward B.  Saturates to math.inf (or 0.0) where float range runs out.
    """
    d = counts.d
    t = d * strength.log_odds_step
    if t > 700.0:
        return math.inf
    if t < -745.0:
        return 0.0
    return strength.odds_step**d if t > -700.0 else math.exp(t)


def subsidy_bounds(ratio: float, strength: SignalStrength, reward: Reward) -> tuple[float, float]:
    """Admissible payment interval (lower, upper) for likelihood ratio `ratio`.

    Every r in (lower, upper) makes both signal types follow their signal;
    at r = lower the signal-A agent is exactly indifferent and the tie
    convention still yields signal-following.  The interval is nonempty for
    every ratio > 0 and contains 0 whenever |d| <= 1.
    """
    if reward.R <= 0:
        raise ValueError(f"reward must be positive to quote a subsidy, got {reward.R}")
    if ratio <= 0:
        raise ValueError(f"likelihood ratio must be positive, got {ratio}")
    q = strength.odds_step
    if math.isinf(ratio):
        return reward.R, reward.R
    lower = reward.R * (q * ratio - 1.0) / (1.0 + q * ratio)
    upper = reward.R * (ratio - q) / (ratio + q)
    return lower, upper


def _lower_bound_stable(d: int, strength: SignalStrength, reward: Reward) -> float:
    # L/R = (qg - 1)/(qg + 1) = tanh(ln(qg)/2) with ln(qg) = (d+1) ln((1-p)/p).
    return reward.R * math.tanh(0.5 * (d + 1) * strength.log_odds_step)


def subsidy_amount(counts: InformativeCounts, strength: SignalStrength, reward: Reward) -> float:
    """Payment quoted for the current round: the interval's lower endpoint.

    Zero outside an incorrect cascade.  Inside one (d <= -2) the endpoint is
    strictly positive and strictly below R; the result is clamped one ulp
    below R where tanh saturates, so the strict bound survives rounding.
    """
    if reward.R <= 0:
        raise ValueError(f"reward must be positive to quote a subsidy, got {reward.R}")
    if phase(counts) is not Phase.INCORRECT_CASCADE:
        return 0.0
    payment = _lower_bound_stable(counts.d, strength, reward)
    return min(payment, math.nextafter(reward.R, 0.0))


def quote(counts: InformativeCounts, strength: SignalStrength, reward: Reward) -> SubsidyQuote:
    """Full incentive quote for the current walk state."""
    ratio = likelihood_ratio(counts, strength)
    d = counts.d
    if 0.0 < ratio < math.inf:
        lower, upper = subsidy_bounds(ratio, strength, reward)
    else:
        # Ratio saturated; evaluate both endpoints in log space.
        log_q = strength.log_odds_step
        lower = reward.R * math.tanh(0.5 * (d + 1) * log_q)
        upper = reward.R * math.tanh(0.5 * (d - 1) * log_q)
    return SubsidyQuote(
        likelihood_ratio=ratio,
        lower=lower,
        upper=upper,
        payment=subsidy_amount(counts, strength, reward),
    )
