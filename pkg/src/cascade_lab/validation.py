"""Named correctness suites behind `cascade-lab validate`.

Each check compares an implementation path against an independent reference:

* walk-equivalence      -- the integer decision rule against a full Bayes
                           recursion over action histories in exact rational
                           arithmetic (ties are exact there, no epsilons).
* signal-following      -- the quoted payment makes both signal types follow
                           their signal throughout the trap region.
* subsidy-interval      -- interval shape: nonempty, contains 0 iff no
                           cascade pressure, payment positive and below R.
* mc-vs-dp              -- Monte-Carlo outcome frequencies and onset means
                           against the DP oracle (z-scores).
* wald-and-budget       -- DP escape times against 4/(2p-1) and DP spend
                           against the budget bound.

References stay independent of the code they check: the Bayes recursion
never looks at walk counts, and the DP oracle never runs the engine.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import model
from .analytics import (
    dp_oracle,
    escape_horizon,
    expected_budget_bound,
    expected_escape_rounds,
    suggested_truncation,
)
from .harness import SweepConfig, compare_to_oracle, run_sweep
from .model import Action, Reward, Signal, SignalStrength
from .subsidy import quote, subsidy_amount
from .walk import InformativeCounts

GRID_P = tuple((51 + 4 * k) / 100 for k in range(13))
_GRID_FRACTIONS = tuple(Fraction(51 + 4 * k, 100) for k in range(13))


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: str
    seconds: float


def _timed(name, fn):
    start = time.perf_counter()
    passed, details = fn()
    return CheckResult(name, passed, details, time.perf_counter() - start)


def _bayes_nodes(p: Fraction, max_len: int):
    """Enumerate reachable action histories under full-Bayes dynamics.

    Yields (like_A, like_B, nA, nB, length): exact likelihoods of the action
    history under each world, with the informative counts implied by the
    recursion.  Histories where a cascade has begun are included; their
    subsequent actions contribute likelihood 1 under both worlds, which is
    how "ignore post-cascade actions" falls out of Bayes rather than being
    assumed.
    """
    stack = [(Fraction(1), Fraction(1), 0, 0, 0)]
    while stack:
        node = stack.pop()
        like_a, like_b, na, nb, length = node
        yield node
        if length == max_len:
            continue
        decisions = {}
        for sig in (Signal.A, Signal.B):
            ps_a = p if sig is Signal.A else 1 - p  # Pr(signal | world A)
            ps_b = 1 - p if sig is Signal.A else p
            score_a = ps_a * like_a  # proportional to posterior on world A
            score_b = ps_b * like_b
            if score_a > score_b:
                decisions[sig] = Action.A
            elif score_a < score_b:
                decisions[sig] = Action.B
            else:
                decisions[sig] = Action.A if sig is Signal.A else Action.B
        if decisions[Signal.A] == decisions[Signal.B]:
            # Uninformative round: action fixed, likelihoods unchanged.
            stack.append((like_a, like_b, na, nb, length + 1))
        else:
            # Informative: the action reveals the signal.
            stack.append((like_a * p, like_b * (1 - p), na + 1, nb, length + 1))
            stack.append((like_a * (1 - p), like_b * p, na, nb + 1, length + 1))


def check_walk_equivalence(max_len: int = 12, grid=None) -> CheckResult:
    """Integer rule == full-Bayes threshold rule on every reachable history."""
    fractions = grid or _GRID_FRACTIONS

    def run():
        nodes = 0
        for p in fractions:
            strength = SignalStrength(float(p))
            for like_a, like_b, na, nb, _length in _bayes_nodes(p, max_len):
                counts = InformativeCounts(na, nb)
                nodes += 1
                for sig in (Signal.A, Signal.B):
                    ps_a = p if sig is Signal.A else 1 - p
                    ps_b = 1 - p if sig is Signal.A else p
                    score_a = ps_a * like_a
                    score_b = ps_b * like_b
                    if score_a > score_b:
                        reference = Action.A
                    elif score_a < score_b:
                        reference = Action.B
                    else:
                        reference = Action.A if sig is Signal.A else Action.B
                    got = model.decide_unsubsidized(sig, counts, strength)
                    if got is not reference:
                        return False, (
                            f"walk-equivalence broken at p={float(p)}, counts=({na},{nb}), "
                            f"signal={sig.value}: integer rule {got.value}, Bayes {reference.value}"
                        )
        return True, f"{nodes} histories x 2 signals across {len(fractions)} p values"

    return _timed("walk-equivalence", run)


def check_signal_following(depth: int = 40, grid=GRID_P) -> CheckResult:
    """Quoted payments induce signal-following everywhere in the trap."""

    def run():
        reward = Reward(1.0)
        cases = 0
        for p in grid:
            strength = SignalStrength(p)
            for nb_minus_na in range(2, depth + 1):
                counts = InformativeCounts(0, nb_minus_na)
                r = subsidy_amount(counts, strength, reward)
                if not r > 0.0:
                    return False, f"non-positive payment {r} at p={p}, d={-nb_minus_na}"
                if r >= reward.R:
                    return False, f"payment {r} >= R at p={p}, d={-nb_minus_na}"
                for sig, want in ((Signal.A, Action.A), (Signal.B, Action.B)):
                    got = model.decide_subsidized(sig, counts, strength, reward, r)
                    cases += 1
                    if got is not want:
                        return False, (
                            f"subsidized agent deviates from signal at p={p}, "
                            f"d={-nb_minus_na}, signal={sig.value}: chose {got.value}"
                        )
        return True, f"{cases} (p, depth, signal) cases, all follow the signal"

    return _timed("signal-following", run)


def check_subsidy_interval(grid=GRID_P) -> CheckResult:
    """Interval shape: L < U everywhere; 0 inside iff |d| <= 1 on free states."""

    def run():
        reward = Reward(1.0)
        for p in grid:
            strength = SignalStrength(p)
            for d in range(-40, 2):
                counts = InformativeCounts(0, -d) if d <= 0 else InformativeCounts(d, 0)
                quoted = quote(counts, strength, reward)
                # The true gap shrinks like exp(-|log-odds|); demand strict
                # ordering only while float64 can represent it.
                resolvable = abs((d + 1) * math.log(strength.odds_step)) < 34.0
                if quoted.lower > quoted.upper or (resolvable and quoted.lower >= quoted.upper):
                    return False, f"empty interval at p={p}, d={d}: {quoted}"
                if abs(d) <= 1 and not (quoted.lower <= 0.0 <= quoted.upper):
                    return False, f"0 outside the free-state interval at p={p}, d={d}"
                if d <= -2 and not (0.0 < quoted.payment < reward.R):
                    return False, f"payment {quoted.payment} out of (0, R) at p={p}, d={d}"
                if d > -2 and quoted.payment != 0.0:
                    return False, f"payment outside the trap at p={p}, d={d}"
        return True, "interval ordered, zero-containment and payment bounds hold"

    return _timed("subsidy-interval", run)


def check_mc_vs_dp(replications: int = 20_000) -> CheckResult:
    """Unsubsidized Monte Carlo matches the oracle within 3 sigma."""

    def run():
        cfg = SweepConfig(
            populations=(200,),
            p_values=(SignalStrength(2 / 3), SignalStrength(0.6)),
            replications=replications,
            base_seed=0,
        )
        report = compare_to_oracle(run_sweep(cfg))
        flagged = [row for row in report if row["flagged"]]
        if flagged:
            return False, f"cells flagged at |z| > 3: {flagged}"
        zs = ", ".join(
            f"p={row['p']:.4g}: z_wrong={row['z_wrong_cascade']:+.2f} z_onset={row['z_onset']:+.2f}"
            for row in report
        )
        return True, zs

    return _timed("mc-vs-dp", run)


def check_wald_and_budget(grid=GRID_P) -> CheckResult:
    """DP escape rounds satisfy Wald's identity; DP spend obeys the bound."""

    def run():
        reward = Reward(1.0)
        for p in grid:
            strength = SignalStrength(p)
            oracle = dp_oracle(
                strength,
                horizon=escape_horizon(strength),
                subsidized=True,
                lower_truncation=suggested_truncation(strength),
                reward=reward,
            )
            wald = oracle.expected_escape_rounds * (2.0 * p - 1.0)
            if abs(wald - 4.0) > 1e-6:
                return False, f"Wald identity off at p={p}: E[N](2p-1) = {wald}"
            bound = expected_budget_bound(strength, reward)
            if oracle.expected_budget > bound:
                return False, (
                    f"budget {oracle.expected_budget} exceeds bound {bound} at p={p}"
                )
            if oracle.expected_subsidized_rounds >= expected_escape_rounds(strength):
                return False, f"subsidized rounds not below total rounds at p={p}"
        return True, f"E[N](2p-1) = 4 +- 1e-6 and spend <= R*4/(2p-1) on {len(grid)} p values"

    return _timed("wald-and-budget", run)


def run_all(quick: bool = False) -> list[CheckResult]:
    """Run every suite; `quick` shrinks the exhaustive grids, not the logic."""
    if quick:
        quick_grid = (0.51, 0.6, 0.75, 0.9, 0.99)
        quick_fractions = (
            Fraction(51, 100),
            Fraction(3, 5),
            Fraction(3, 4),
            Fraction(9, 10),
            Fraction(99, 100),
        )
        return [
            check_walk_equivalence(max_len=8, grid=quick_fractions),
            check_signal_following(depth=40, grid=quick_grid),
            check_subsidy_interval(grid=quick_grid),
            check_mc_vs_dp(replications=10_000),
            check_wald_and_budget(grid=quick_grid),
        ]
    return [
        check_walk_equivalence(),
        check_signal_following(),
        check_subsidy_interval(),
        check_mc_vs_dp(),
        check_wald_and_budget(),
    ]
