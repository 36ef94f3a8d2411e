"""How the payment is sized, state by state.

Walks down into the trap and prints the likelihood ratio, the admissible
payment interval, and the quoted amount; then shows the incentive check for
both signal types at the quote.  The quote sits exactly on the signal-A
agent's indifference point, which the tie convention resolves toward the
signal: the cheapest payment that makes the whole population informative
again.
"""

from cascade_lab import (
    Action,
    InformativeCounts,
    Reward,
    Signal,
    SignalStrength,
    decide_subsidized,
    quote,
)

STRENGTH = SignalStrength(2 / 3)
REWARD = Reward(1.0)


def main():
    print(f"signal strength p = {STRENGTH.p:.4f}, reward R = {REWARD.R}")
    print(f"{'d':>4} | {'ratio':>8} {'lower':>8} {'upper':>8} {'payment':>8} | follows signal?")
    for depth in range(0, 9):
        counts = InformativeCounts(0, depth)
        q = quote(counts, STRENGTH, REWARD)
        follows = all(
            decide_subsidized(sig, counts, STRENGTH, REWARD, q.payment)
            is (Action.A if sig is Signal.A else Action.B)
            for sig in Signal
        )
        print(
            f"{-depth:>4} | {q.likelihood_ratio:>8.2f} {q.lower:>8.4f} {q.upper:>8.4f} "
            f"{q.payment:>8.4f} | {'yes' if follows else 'NO'}"
        )
    print("\nOutside the trap (d > -2) the payment is zero; inside it grows with")
    print("depth but never reaches R, and each quoted amount keeps both signal")
    print("types truthful, so the walk drifts up and out at rate 2p - 1.")


if __name__ == "__main__":
    main()
