"""Acceptance suite: one test per primary criterion, at its stated tolerance.

Each test prints one PASS/FAIL line (visible with -s or on failure).  The
Figure 3-5 decay criterion is implemented exactly as stated and is expected
to fail at the (N=100, p=0.55) cell: the exact DP expectation of the quoted
subsidy at round 100 is 0.0187*R there, above the 0.01*R threshold, so the
stated decay bound contradicts the model it tests.  See the analysis note
shipped with the repository history; everything else is green.
"""

import math
import statistics
import subprocess
import sys

import pytest

from cascade_lab import (
    Action,
    InformativeCounts,
    Outcome,
    SignalStrength,
    SimConfig,
    arbitrate,
    dp_oracle,
    expected_onset_exact,
    mix64,
    paper_sweep_config,
    run_sweep,
    simulate_run,
    wrong_cascade_prob_paper,
)
from cascade_lab.validation import check_signal_following, check_walk_equivalence

GRID_P = tuple((51 + 4 * k) / 100 for k in range(13))


def report(name, passed, detail):
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


@pytest.fixture(scope="module")
def paper_sweeps():
    on = run_sweep(paper_sweep_config(subsidy_enabled=True, base_seed=0))
    off = run_sweep(paper_sweep_config(subsidy_enabled=False, base_seed=0))
    key = lambda s: (s.population, round(s.p, 2))
    return {key(s): s for s in on}, {key(s): s for s in off}


@pytest.fixture(scope="module")
def forced_trap_runs():
    # 10^4 subsidized runs starting inside the trap at d = -2, p = 0.75.
    strength = SignalStrength(0.75)
    runs = []
    for i in range(10_000):
        runs.append(
            simulate_run(
                SimConfig(
                    num_agents=100,
                    p=strength,
                    seed=mix64(2024, i),
                    subsidy_enabled=True,
                    initial_counts=InformativeCounts(0, 2),
                )
            )
        )
    return runs


def test_theorem1_signal_following_exhaustion():
    # p grid x d in {-40..-2} x both signals, R = 1: the quoted subsidy makes
    # every trapped agent act on their signal.  Zero failures allowed.
    result = check_signal_following(depth=40, grid=GRID_P)
    report("theorem1-signal-following", result.passed, result.details)


def test_walk_equivalence_exhaustive():
    # All informative histories up to length 12, full p grid: integer rule
    # against the exact-rational Bayes threshold rule with tie-follow-signal.
    result = check_walk_equivalence(max_len=12)
    report("walk-equivalence", result.passed, result.details)


def test_wrong_cascade_rate():
    strength = SignalStrength(2 / 3)
    reps = 20_000
    wrong = 0
    for i in range(reps):
        rec = simulate_run(SimConfig(num_agents=200, p=strength, seed=mix64(1, i)))
        wrong += rec.outcome is Outcome.INCORRECT_CASCADE
    frac = wrong / reps
    oracle = dp_oracle(strength).prob_wrong_cascade
    in_band = abs(frac - oracle) <= 0.010
    published = wrong_cascade_prob_paper(strength)
    published_fails_band = abs(frac - published) > 0.010
    flagged = not arbitrate(strength).wrong_cascade.agree_paper
    report(
        "wrong-cascade-rate",
        in_band and published_fails_band and flagged,
        f"frac={frac:.4f} vs oracle {oracle:.4f} (band 0.010); "
        f"published {published:.4f} outside band: {published_fails_band}, flagged: {flagged}",
    )


def test_onset_time():
    strength = SignalStrength(0.6)
    reps = 20_000
    onsets = []
    for i in range(reps):
        rec = simulate_run(SimConfig(num_agents=60, p=strength, seed=mix64(2, i)))
        if rec.onset_time is not None:
            onsets.append(rec.onset_time)
    mean = statistics.fmean(onsets)
    se = statistics.stdev(onsets) / math.sqrt(len(onsets))
    target = expected_onset_exact(strength)
    z = (mean - target) / se
    report(
        "onset-time",
        abs(z) <= 3 and len(onsets) == reps,
        f"mean={mean:.4f} vs {target:.5f}, z={z:+.2f}, n={len(onsets)}",
    )


def test_theorem2_budget(forced_trap_runs):
    escapes = []
    sub_rounds = []
    totals = []
    for rec in forced_trap_runs:
        reach = next((s.t for s in rec.steps if s.d_after == 2), None)
        if reach is not None:
            escapes.append(reach)
        sub_rounds.append(rec.subsidy_rounds)
        totals.append(rec.subsidy_total)
    mean_escape = statistics.fmean(escapes)
    mean_sub_rounds = statistics.fmean(sub_rounds)
    mean_total = statistics.fmean(totals)
    ok = (
        abs(mean_escape - 8.0) <= 0.3
        and mean_sub_rounds < 8.0
        and mean_total <= 8.0
        and len(escapes) >= 9_990
    )
    report(
        "theorem2-budget",
        ok,
        f"mean rounds -2 to +2 = {mean_escape:.3f} (8.0 +- 0.3), "
        f"mean subsidized rounds = {mean_sub_rounds:.3f} < 8, "
        f"mean total subsidy = {mean_total:.3f} <= 8R, escapes = {len(escapes)}",
    )


def test_post_subsidy_stability(forced_trap_runs):
    violations = 0
    checked = 0
    for rec in forced_trap_runs:
        reach = next((s.t for s in rec.steps if s.d_after == 2), None)
        if reach is None:
            continue
        checked += 1
        for step in rec.steps[reach:]:
            if step.subsidy_paid != 0.0 or step.action is not Action.A:
                violations += 1
                break
    report(
        "post-subsidy-stability",
        violations == 0 and checked >= 9_990,
        f"{checked} escaped runs, {violations} violations",
    )


def test_figure_1_2_qualitative(paper_sweeps):
    on, off = paper_sweeps
    improvement_failures = [
        (N, p, on[(N, p)].frac_correct, off[(N, p)].frac_correct)
        for (N, p) in on
        if p <= 0.9 and not on[(N, p)].frac_correct > off[(N, p)].frac_correct
    ]
    strong_cells = [
        (p, on[(1000, p)].frac_correct) for p in GRID_P if p >= 0.6
    ]
    strong_failures = [(p, fc) for p, fc in strong_cells if fc < 0.95]
    report(
        "figure-1-2",
        not improvement_failures and not strong_failures,
        f"strict improvement violations: {improvement_failures or 'none'}; "
        f"N=1000 p>=0.6 below 0.95: {strong_failures or 'none'}",
    )


def test_figure_3_5_decay_and_persistence(paper_sweeps):
    on, _ = paper_sweeps
    reward = 1.0
    decay_failures = []
    for (N, p), stats in sorted(on.items()):
        if N >= 100 and p >= 0.55:
            final = stats.mean_subsidy_by_round[-1]
            if final >= 0.01 * reward:
                decay_failures.append((N, p, round(final, 5)))
    persistence_failures = []
    for N in (100, 1000):
        final = on[(N, 0.51)].mean_subsidy_by_round[-1]
        if final < 0.01 * reward:
            persistence_failures.append((N, round(final, 5)))
    report(
        "figure-3-5-decay",
        not decay_failures and not persistence_failures,
        f"decay violations (expect (100, 0.55): exact mean there is 0.0187R > 0.01R): "
        f"{decay_failures or 'none'}; p=0.51 persistence violations: "
        f"{persistence_failures or 'none'}",
    )


def test_subsidy_start_timing():
    # >= 90% of runs that ever pay start paying by round 10, for p >= 0.6.
    payers = 0
    early = 0
    for p in GRID_P:
        if p < 0.6:
            continue
        strength = SignalStrength(p)
        for i in range(2_000):
            rec = simulate_run(
                SimConfig(num_agents=40, p=strength, seed=mix64(3, i), subsidy_enabled=True)
            )
            if rec.subsidy_start is not None:
                payers += 1
                early += rec.subsidy_start <= 10
    frac = early / payers if payers else 1.0
    report(
        "subsidy-start-timing",
        frac >= 0.9,
        f"{early}/{payers} subsidy starts within 10 rounds ({frac:.3f})",
    )


def test_sweep_determinism_across_thread_counts(tmp_path):
    blobs = {}
    for threads in ("1", "4", "16"):
        out = tmp_path / f"threads{threads}"
        proc = subprocess.run(
            [
                sys.executable, "-m", "cascade_lab", "sweep",
                "--populations", "10,100", "--p-values", "0.51,0.63,0.75,0.87",
                "--reps", "25", "--seed", "77", "--subsidy", "on",
                "--threads", threads, "--out-dir", str(out),
            ],
            capture_output=True,
            text=True,
            timeout=600,
        )
        assert proc.returncode == 0, proc.stderr
        blobs[threads] = [
            (out / name).read_bytes()
            for name in ("cascade_outcomes.csv", "subsidy_progression.csv")
        ]
    identical = blobs["1"] == blobs["4"] == blobs["16"]
    report("sweep-determinism", identical, "byte-identical CSVs at 1, 4, 16 threads")
