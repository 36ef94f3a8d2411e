"""Closed forms, the DP oracle, and the arbitration between them.

The independent reference here is first-step analysis: absorption
probabilities and expected hitting times of the +-2 walk solve small linear
systems, which numpy solves without any shared code with the DP.
"""

import numpy as np
import pytest

from cascade_lab import (
    Reward,
    SignalStrength,
    arbitrate,
    dp_oracle,
    escape_horizon,
    expected_budget_bound,
    expected_escape_rounds,
    expected_onset_exact,
    expected_onset_paper,
    suggested_truncation,
    wrong_cascade_prob_exact,
    wrong_cascade_prob_paper,
)
from conftest import GRID_P


def first_step_absorption(p):
    """P(hit -2 before +2 | start d) for d in {-1, 0, 1}, by linear solve.

    h(d) = q [d-1 == -2] + q h(d-1) + p h(d+1) with h(+2) = 0.
    """
    q = 1.0 - p
    A = np.array([[1.0, -p, 0.0], [-q, 1.0, -p], [0.0, -q, 1.0]])
    b = np.array([q, 0.0, 0.0])
    return np.linalg.solve(A, b)


def first_step_hitting_time(p):
    """E[rounds to absorption | start d] for d in {-1, 0, 1}."""
    q = 1.0 - p
    A = np.array([[1.0, -p, 0.0], [-q, 1.0, -p], [0.0, -q, 1.0]])
    b = np.ones(3)
    return np.linalg.solve(A, b)


class TestClosedFormsAsPrinted:
    def test_wrong_cascade_published_values(self):
        assert wrong_cascade_prob_paper(SignalStrength(2 / 3)) == pytest.approx(0.25, abs=1e-12)
        assert wrong_cascade_prob_paper(SignalStrength(0.75)) == pytest.approx(1 / 9, abs=1e-12)
        assert wrong_cascade_prob_paper(SignalStrength(1 - 1e-12)) < 1e-10

    def test_onset_published_values(self):
        assert expected_onset_paper(SignalStrength(0.9)) == pytest.approx(
            1.58 / 0.648, rel=1e-10
        )
        assert expected_onset_paper(SignalStrength(1 - 1e-12)) == pytest.approx(2.0, abs=1e-6)

    def test_onset_published_goes_negative_below_two_minus_root_two(self):
        # The published expression is negative for p < 2 - sqrt(2): an
        # impossible expected time, which is why the oracle arbitrates.
        assert expected_onset_paper(SignalStrength(0.51)) == pytest.approx(
            -0.4402 / 0.005202, rel=1e-9
        )
        assert expected_onset_paper(SignalStrength(0.51)) < 0
        assert expected_onset_paper(SignalStrength(0.58)) < 0
        assert expected_onset_paper(SignalStrength(0.59)) > 0


class TestClosedFormsExact:
    def test_wrong_cascade_matches_linear_solve(self):
        for p in GRID_P:
            ruin = first_step_absorption(p)[1]  # start at d = 0
            assert wrong_cascade_prob_exact(SignalStrength(p)) == pytest.approx(
                ruin, abs=1e-12
            )

    def test_wrong_cascade_spot_values(self):
        assert wrong_cascade_prob_exact(SignalStrength(2 / 3)) == pytest.approx(0.2, abs=1e-12)
        assert wrong_cascade_prob_exact(SignalStrength(0.6)) == pytest.approx(
            0.16 / 0.52, abs=1e-12
        )
        assert wrong_cascade_prob_exact(SignalStrength(1 - 1e-12)) < 1e-10

    def test_onset_matches_linear_solve(self):
        for p in GRID_P:
            hit = first_step_hitting_time(p)[1]
            assert expected_onset_exact(SignalStrength(p)) == pytest.approx(hit, abs=1e-9)

    def test_onset_spot_values(self):
        assert expected_onset_exact(SignalStrength(0.6)) == pytest.approx(2 / 0.52, abs=1e-12)
        assert expected_onset_exact(SignalStrength(2 / 3)) == pytest.approx(3.6, abs=1e-12)
        assert expected_onset_exact(SignalStrength(1 - 1e-12)) == pytest.approx(2.0, abs=1e-9)

    def test_escape_rounds_values(self):
        assert expected_escape_rounds(SignalStrength(0.75)) == pytest.approx(8.0, abs=1e-12)
        assert expected_escape_rounds(SignalStrength(0.51)) == pytest.approx(200.0, rel=1e-12)
        assert expected_escape_rounds(SignalStrength(1 - 1e-12)) == pytest.approx(4.0, abs=1e-9)

    def test_budget_bound_values(self):
        assert expected_budget_bound(SignalStrength(0.75), Reward(1.0)) == pytest.approx(8.0)
        assert expected_budget_bound(SignalStrength(0.75), Reward(2.0)) == pytest.approx(16.0)
        assert expected_budget_bound(SignalStrength(0.6), Reward(1.0)) == pytest.approx(20.0)
        with pytest.raises(ValueError):
            expected_budget_bound(SignalStrength(0.6), Reward(0.0))


class TestDpOracleUnsubsidized:
    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            dp_oracle(SignalStrength(0.7), horizon=0)
        with pytest.raises(ValueError):
            dp_oracle(SignalStrength(0.7), subsidized=True, lower_truncation=5)

    def test_absorption_probability_at_two_thirds(self):
        result = dp_oracle(SignalStrength(2 / 3), horizon=10_000)
        assert result.prob_wrong_cascade == pytest.approx(0.2, abs=1e-9)

    def test_matches_closed_forms_over_grid(self):
        for p in GRID_P:
            s = SignalStrength(p)
            result = dp_oracle(s)
            assert result.prob_wrong_cascade == pytest.approx(
                wrong_cascade_prob_exact(s), abs=1e-12
            )
            assert result.expected_onset == pytest.approx(expected_onset_exact(s), abs=1e-9)

    def test_probabilities_partition_unity(self):
        for p in (0.51, 0.75, 0.99):
            r = dp_oracle(SignalStrength(p))
            total = r.prob_wrong_cascade + r.prob_correct_cascade + r.prob_no_cascade_at_T
            assert total == pytest.approx(1.0, abs=1e-12)
            assert r.prob_no_cascade_at_T < 1e-9

    def test_short_horizon_leaves_mass_unabsorbed(self):
        r = dp_oracle(SignalStrength(0.51), horizon=4)
        assert r.prob_no_cascade_at_T > 0.1
        total = r.prob_wrong_cascade + r.prob_correct_cascade + r.prob_no_cascade_at_T
        assert total == pytest.approx(1.0, abs=1e-14)

    def test_onset_std_positive(self):
        assert dp_oracle(SignalStrength(0.6)).onset_std > 0.5


class TestDpOracleSubsidized:
    def test_escape_time_is_wald_value_at_075(self):
        r = dp_oracle(SignalStrength(0.75), horizon=20_000, subsidized=True, lower_truncation=60)
        assert r.expected_escape_rounds == pytest.approx(8.0, abs=1e-6)
        assert r.truncation_leakage < 1e-9

    def test_wald_identity_over_grid(self):
        for p in GRID_P:
            s = SignalStrength(p)
            r = dp_oracle(
                s,
                horizon=escape_horizon(s),
                subsidized=True,
                lower_truncation=suggested_truncation(s),
            )
            assert r.expected_escape_rounds * (2 * p - 1) == pytest.approx(4.0, abs=1e-6)

    def test_budget_below_bound_over_grid(self):
        reward = Reward(1.0)
        for p in GRID_P:
            s = SignalStrength(p)
            r = dp_oracle(
                s,
                horizon=escape_horizon(s),
                subsidized=True,
                lower_truncation=suggested_truncation(s),
                reward=reward,
            )
            assert 0.0 < r.expected_budget <= expected_budget_bound(s, reward)
            assert r.expected_subsidized_rounds < r.expected_escape_rounds

    def test_shallow_truncation_is_rejected_at_small_p(self):
        # At p = 0.51 the walk dips 58 levels below the start with
        # probability ~0.1, far beyond the acceptable leakage.
        with pytest.raises(ValueError, match="leak"):
            dp_oracle(
                SignalStrength(0.51), horizon=50_000, subsidized=True, lower_truncation=60
            )

    def test_budget_scales_with_reward(self):
        s = SignalStrength(0.75)
        r1 = dp_oracle(s, horizon=20_000, subsidized=True, reward=Reward(1.0))
        r3 = dp_oracle(s, horizon=20_000, subsidized=True, reward=Reward(3.0))
        assert r3.expected_budget == pytest.approx(3 * r1.expected_budget, rel=1e-9)


class TestArbitration:
    def test_published_formulas_flagged_rederived_confirmed(self):
        for p in (0.51, 0.75, 0.99):
            row = arbitrate(SignalStrength(p))
            assert row.wrong_cascade.agree_rederived
            assert not row.wrong_cascade.agree_paper
            assert row.expected_onset.agree_rederived
            assert not row.expected_onset.agree_paper
            assert row.escape_rounds.agree_rederived
            assert row.budget_within_bound

    def test_report_values_carry_through(self):
        row = arbitrate(SignalStrength(0.75))
        assert row.wrong_cascade.paper_value == pytest.approx(1 / 9, abs=1e-12)
        assert row.wrong_cascade.rederived_value == pytest.approx(0.1, abs=1e-12)
        assert row.escape_rounds.paper_value == pytest.approx(8.0)
        assert row.budget_bound == pytest.approx(8.0)


def test_suggested_truncation_scales_with_weak_signals():
    assert suggested_truncation(SignalStrength(0.75)) == 60
    assert suggested_truncation(SignalStrength(0.51)) > 600
    leak = dp_oracle(
        SignalStrength(0.55),
        horizon=escape_horizon(SignalStrength(0.55)),
        subsidized=True,
        lower_truncation=suggested_truncation(SignalStrength(0.55)),
    ).truncation_leakage
    assert leak < 1e-9


def test_wrong_cascade_exact_value_at_075():
    # q = 1/4, p = 3/4: q^2/(p^2+q^2) = (1/16)/(10/16) = 1/10.
    assert wrong_cascade_prob_exact(SignalStrength(0.75)) == pytest.approx(0.1, abs=1e-15)
