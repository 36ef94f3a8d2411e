"""A single population, with and without the intervention.

Runs the same seed twice at a weak signal strength: once free, once with the
subsidy engine on, and prints the round-by-round story.  The two runs share
every signal draw, so any divergence is purely the intervention at work.
"""

from cascade_lab import Reward, SignalStrength, SimConfig, simulate_run

SEED = 8                 # this stream herds onto B by round 3 when left alone
STRENGTH = SignalStrength(0.6)


def describe(rec, title):
    print(f"--- {title} ---")
    print(f"outcome: {rec.outcome.value}, cascade onset at round {rec.onset_time}")
    if rec.subsidy_rounds:
        print(
            f"subsidy: {rec.subsidy_rounds} rounds starting at t={rec.subsidy_start}, "
            f"total spend {rec.subsidy_total:.3f}"
        )
    for step in rec.steps[:20]:
        paid = f" paid={step.subsidy_paid:.3f}" if step.subsidy_paid else ""
        print(
            f"  t={step.t:>3} signal={step.signal.value} action={step.action.value} "
            f"phase={step.phase_before.value:<16} d={step.d_after:+d}{paid}"
        )
    if len(rec.steps) > 20:
        print(f"  ... {len(rec.steps) - 20} more rounds, d stays {rec.steps[-1].d_after:+d}")
    print()


def main():
    base = dict(num_agents=60, p=STRENGTH, R=Reward(1.0), seed=SEED)
    describe(simulate_run(SimConfig(subsidy_enabled=False, **base)), "free dynamics")
    describe(simulate_run(SimConfig(subsidy_enabled=True, **base)), "with subsidy engine")


if __name__ == "__main__":
    main()
