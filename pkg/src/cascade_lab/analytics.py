"""Closed-form statistics of the cascade walk and an exact DP arbiter.

Two families of closed forms are shipped side by side:

* ``*_paper``   -- the published expressions, reproduced verbatim.  Two of
  them fail against the model they describe (see README errata): the wrong-
  cascade probability (1-p)^2/p^2 is the one-barrier ruin value, and the
  onset-time expression (8p - 4 - 2p^2)/(2p^3 - p^2) goes negative below
  p = 2 - sqrt(2).
* ``*_exact``   -- re-derivations for the two-barrier walk the model actually
  performs: wrong-cascade probability q^2/(p^2 + q^2) and expected onset
  2/(p^2 + q^2), with q = 1 - p.

``dp_oracle`` is the arbiter: a forward dynamic program over the walk that
computes absorption probabilities, hitting-time moments, and (for the
subsidized walk) occupation-weighted payment totals, with explicitly tracked
truncation leakage instead of assumed-negligible tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Reward, SignalStrength
from .subsidy import subsidy_amount
from .walk import InformativeCounts

DEFAULT_HORIZON = 100_000
DEFAULT_TRUNCATION = 60
_MASS_FLOOR = 1e-320
_LEAK_REJECT = 1e-6


def wrong_cascade_prob_paper(strength: SignalStrength) -> float:
    """Published incorrect-cascade probability, (1-p)^2 / p^2, verbatim."""
    p = strength.p
    return (1.0 - p) ** 2 / p**2


def wrong_cascade_prob_exact(strength: SignalStrength) -> float:
    """Probability the walk from 0 hits -2 before +2: q^2 / (p^2 + q^2)."""
    p = strength.p
    q = 1.0 - p
    return q * q / (p * p + q * q)


def expected_onset_paper(strength: SignalStrength) -> float:
    """Published expected rounds until a cascade begins, verbatim.

    Negative for p < 2 - sqrt(2) ~ 0.586; reported as printed and flagged
    against the oracle rather than corrected silently.
    """
    p = strength.p
    return (8.0 * p - 4.0 - 2.0 * p * p) / (2.0 * p**3 - p * p)


def expected_onset_exact(strength: SignalStrength) -> float:
    """Expected absorption time of the walk from 0 with barriers at +-2.

    Wald's first identity with the two-barrier absorption probabilities
    gives 2 / (p^2 + q^2).
    """
    p = strength.p
    q = 1.0 - p
    return 2.0 / (p * p + q * q)


def expected_escape_rounds(strength: SignalStrength) -> float:
    """Expected rounds for the signal-following walk to travel -2 -> +2.

    Wald: the stopped sum is 4 and each step has mean 2p - 1, so the
    expectation is 4 / (2p - 1).  Upper-bounds the subsidized rounds, since
    rounds spent at |d| <= 1 are free.
    """
    return 4.0 / (2.0 * strength.p - 1.0)


def expected_budget_bound(strength: SignalStrength, reward: Reward) -> float:
    """Worst-case expected intervention budget, R * 4 / (2p - 1)."""
    if reward.R <= 0:
        raise ValueError(f"reward must be positive, got {reward.R}")
    return reward.R * expected_escape_rounds(strength)


@dataclass(frozen=True)
class OracleResult:
    """Exact DP output; probabilities partition unity with the residual mass.

    ``prob_no_cascade_at_T`` is all mass not absorbed by the horizon,
    including any mass killed at the truncation boundary (also reported
    separately as ``truncation_leakage``).  Fields beyond the probabilities
    and first moments (``expected_subsidized_rounds``, ``onset_std``) are
    diagnostics consumed by the Monte-Carlo cross checks.
    """

    prob_wrong_cascade: float
    prob_correct_cascade: float
    prob_no_cascade_at_T: float
    expected_onset: float
    expected_escape_rounds: float
    expected_budget: float
    expected_subsidized_rounds: float = 0.0
    truncation_leakage: float = 0.0
    onset_std: float = 0.0


class _Kahan:
    """Compensated accumulator; keeps mass bookkeeping exact to ~1 ulp."""

    __slots__ = ("total", "_c")

    def __init__(self):
        self.total = 0.0
        self._c = 0.0

    def add(self, x: float):
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


def suggested_truncation(strength: SignalStrength, leak_target: float = 1e-13) -> int:
    """Truncation depth keeping expected leakage below `leak_target`.

    The chance the subsidized walk ever falls from -2 to -k is
    ((1-p)/p) ** (k - 2); positive drift makes deep excursions exponentially
    rare, but how rare depends on p, so the depth is computed, not fixed.
    """
    steps = math.log(leak_target) / math.log(strength.odds_step)
    return max(DEFAULT_TRUNCATION, 2 + math.ceil(steps))


def escape_horizon(strength: SignalStrength) -> int:
    """Horizon by which unabsorbed subsidized-walk mass is negligible.

    First-passage tails decay like exp(-kappa t) with
    kappa = 1 - 2 sqrt(p(1-p)).
    """
    p = strength.p
    kappa = 1.0 - 2.0 * math.sqrt(p * (1.0 - p))
    return min(300_000, max(10_000, math.ceil(45.0 / kappa)))


def dp_oracle(
    strength: SignalStrength,
    horizon: int = DEFAULT_HORIZON,
    subsidized: bool = False,
    lower_truncation: int = DEFAULT_TRUNCATION,
    reward: Reward = Reward(1.0),
    self_check: bool = True,
) -> OracleResult:
    """Exact forward dynamic program over the cascade walk.

    Unsubsidized: start at d = 0 with absorbing barriers at +-2; returns
    absorption probabilities, onset moments, and the mass still unabsorbed at
    the horizon.

    Subsidized: start at d = -2, absorb only at +2, truncate below at
    -lower_truncation with the killed mass tracked; accumulates the expected
    number of subsidized rounds and the expected budget by weighting each
    d <= -2 state's occupation probability by the quoted payment.

    Raises if the truncation leaks more than 1e-6 of the mass; use
    `suggested_truncation` to size the table for small p.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if lower_truncation < 10:
        raise ValueError(f"lower truncation must be >= 10, got {lower_truncation}")
    if subsidized:
        return _dp_subsidized(strength, horizon, lower_truncation, reward, self_check)
    return _dp_unsubsidized(strength, horizon, self_check)


def _dp_unsubsidized(strength: SignalStrength, horizon: int, self_check: bool) -> OracleResult:
    p = strength.p
    q = 1.0 - p
    # Transient states d = -1, 0, +1.
    m_lo, m_mid, m_hi = 0.0, 1.0, 0.0
    wrong = _Kahan()
    correct = _Kahan()
    onset = 0.0
    onset_sq = 0.0
    for t in range(1, horizon + 1):
        total = m_lo + m_mid + m_hi
        if total < _MASS_FLOOR:
            break
        absorbed_wrong = q * m_lo
        absorbed_correct = p * m_hi
        wrong.add(absorbed_wrong)
        correct.add(absorbed_correct)
        absorbed = absorbed_wrong + absorbed_correct
        onset += t * absorbed
        onset_sq += float(t) * t * absorbed
        m_lo, m_mid, m_hi = q * m_mid, p * m_lo + q * m_hi, p * m_mid
        if self_check:
            residual = m_lo + m_mid + m_hi
            drift = wrong.total + correct.total + residual - 1.0
            if abs(drift) > 1e-12:
                raise AssertionError(f"mass drifted by {drift} at step {t}")
    residual = m_lo + m_mid + m_hi
    return OracleResult(
        prob_wrong_cascade=wrong.total,
        prob_correct_cascade=correct.total,
        prob_no_cascade_at_T=residual,
        expected_onset=onset,
        expected_escape_rounds=0.0,
        expected_budget=0.0,
        onset_std=math.sqrt(max(onset_sq - onset * onset, 0.0)),
    )


def _dp_subsidized(
    strength: SignalStrength,
    horizon: int,
    truncation: int,
    reward: Reward,
    self_check: bool,
) -> OracleResult:
    p = strength.p
    q = 1.0 - p
    # Kept states d = -truncation + 1 ... +1; index i maps to d = i - truncation + 1.
    # Stepping down from the lowest kept state reaches the truncation boundary
    # and is killed (tracked as leakage); stepping up from d = +1 absorbs.
    size = truncation + 1
    mass = np.zeros(size)
    start = truncation - 3  # d = -2
    mass[start] = 1.0
    trap_top = truncation - 2  # states [0, trap_top) have d <= -2
    payments = np.array(
        [
            subsidy_amount(InformativeCounts(0, -(i - truncation + 1)), strength, reward)
            for i in range(trap_top)
        ]
    )
    correct = _Kahan()
    leaked = _Kahan()
    rounds = 0.0
    sub_rounds = 0.0
    budget = 0.0
    new = np.zeros(size)
    for t in range(1, horizon + 1):
        total = float(mass.sum())
        if total < _MASS_FLOOR:
            break
        rounds += total  # E[N] = sum over t of P(N >= t)
        trap = mass[:trap_top]
        sub_rounds += float(trap.sum())
        budget += float(trap @ payments)
        correct.add(p * float(mass[-1]))
        leaked.add(q * float(mass[0]))
        new[:] = 0.0
        new[1:] += p * mass[:-1]
        new[:-1] += q * mass[1:]
        mass, new = new, mass
        if self_check:
            drift = correct.total + leaked.total + float(mass.sum()) - 1.0
            if abs(drift) > 1e-12:
                raise AssertionError(f"mass drifted by {drift} at step {t}")
    leak = leaked.total
    if leak > _LEAK_REJECT:
        raise ValueError(
            f"truncation at -{truncation} leaks {leak:.3e} of the mass; "
            f"deepen it (see suggested_truncation)"
        )
    residual = float(mass.sum())
    return OracleResult(
        prob_wrong_cascade=0.0,
        prob_correct_cascade=correct.total,
        prob_no_cascade_at_T=residual + leak,
        expected_onset=0.0,
        expected_escape_rounds=rounds,
        expected_budget=budget,
        expected_subsidized_rounds=sub_rounds,
        truncation_leakage=leak,
    )


@dataclass(frozen=True)
class ClosedFormReport:
    """One quantity compared three ways: published, re-derived, oracle."""

    paper_value: float
    rederived_value: float
    oracle_value: float
    agree_paper: bool
    agree_rederived: bool

    REL_TOL = 1e-9

    @classmethod
    def compare(cls, paper_value: float, rederived_value: float, oracle_value: float):
        def agrees(v):
            return abs(v - oracle_value) <= cls.REL_TOL * abs(oracle_value)

        return cls(
            paper_value=paper_value,
            rederived_value=rederived_value,
            oracle_value=oracle_value,
            agree_paper=agrees(paper_value),
            agree_rederived=agrees(rederived_value),
        )


@dataclass(frozen=True)
class ArbitrationRow:
    """Everything the oracle can say about one signal strength."""

    p: float
    wrong_cascade: ClosedFormReport
    expected_onset: ClosedFormReport
    escape_rounds: ClosedFormReport
    budget_oracle: float
    budget_bound: float
    budget_within_bound: bool


def arbitrate(strength: SignalStrength, reward: Reward = Reward(1.0)) -> ArbitrationRow:
    """Compare published and re-derived closed forms against the DP oracle.

    The escape-rounds row carries the Wald value 4/(2p-1) in both the paper
    and re-derived slots (the published statement is correct there); the
    budget is an inequality, reported as bound / oracle spend / flag.
    """
    free = dp_oracle(strength, horizon=DEFAULT_HORIZON, subsidized=False)
    sub = dp_oracle(
        strength,
        horizon=escape_horizon(strength),
        subsidized=True,
        lower_truncation=suggested_truncation(strength),
        reward=reward,
    )
    wald = expected_escape_rounds(strength)
    bound = expected_budget_bound(strength, reward)
    return ArbitrationRow(
        p=strength.p,
        wrong_cascade=ClosedFormReport.compare(
            wrong_cascade_prob_paper(strength),
            wrong_cascade_prob_exact(strength),
            free.prob_wrong_cascade,
        ),
        expected_onset=ClosedFormReport.compare(
            expected_onset_paper(strength),
            expected_onset_exact(strength),
            free.expected_onset,
        ),
        escape_rounds=ClosedFormReport.compare(wald, wald, sub.expected_escape_rounds),
        budget_oracle=sub.expected_budget,
        budget_bound=bound,
        budget_within_bound=sub.expected_budget <= bound,
    )
