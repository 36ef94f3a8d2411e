"""Shared grids and exact-arithmetic reference helpers."""

from fractions import Fraction

import pytest

from cascade_lab import SignalStrength

# The experimental signal-strength grid: 0.51, 0.55, ..., 0.99.
GRID_P = tuple((51 + 4 * k) / 100 for k in range(13))
GRID_FRACTIONS = tuple(Fraction(51 + 4 * k, 100) for k in range(13))


@pytest.fixture(scope="session")
def grid_strengths():
    return tuple(SignalStrength(p) for p in GRID_P)


def exact_subsidy_bounds(gamma: Fraction, p: Fraction, reward: Fraction = Fraction(1)):
    """Interval endpoints in exact rational arithmetic.

    L makes the signal-A agent indifferent between actions, U the signal-B
    agent; both are derived from the normalized posteriors
      Pr(A | H, s=A) = 1/(1+qg), Pr(B | H, s=A) = qg/(1+qg),
      Pr(A | H, s=B) = 1/(1+g/q), Pr(B | H, s=B) = (g/q)/(1+g/q),
    with q = (1-p)/p.
    """
    q = (1 - p) / p
    lower = reward * (q * gamma - 1) / (1 + q * gamma)
    upper = reward * (gamma - q) / (gamma + q)
    return lower, upper


def exact_utilities(signal_is_a: bool, d: int, p: Fraction, reward: Fraction, r: Fraction):
    """(u_A, u_B) for a subsidized agent, in exact rationals."""
    q = (1 - p) / p
    odds_against_a = q ** (d + (1 if signal_is_a else -1))
    post_a = Fraction(1) / (1 + odds_against_a)
    post_b = odds_against_a / (1 + odds_against_a)
    return r + reward * post_a, reward * post_b
