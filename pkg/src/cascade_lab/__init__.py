"""Sequential Bayesian decision cascades and the subsidy that redirects them.

A population of agents chooses between two actions one at a time, each seeing
a private signal and the full history of previous choices.  Herding onto the
worse action (a pessimism trap) happens with constant probability; the
subsidy scheme here pays exactly enough to make signal-following rational
again, walks the population into the correct cascade, and can then be
withdrawn.  The package simulates the process, quotes the payments, and
cross-checks every closed-form claim against an exact dynamic program.
"""

from .analytics import (
    ArbitrationRow,
    ClosedFormReport,
    OracleResult,
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
from .engine import (
    Outcome,
    RunRecord,
    SimConfig,
    StepRecord,
    classify_outcome,
    run_record_to_dict,
    run_record_to_json,
    simulate_run,
)
from .harness import (
    PAPER_P_GRID,
    PAPER_POPULATIONS,
    PAPER_REPLICATIONS,
    AggregateStats,
    SweepConfig,
    compare_to_oracle,
    export_csv,
    paper_sweep_config,
    run_sweep,
)
from .model import (
    Action,
    Belief,
    Reward,
    Signal,
    SignalStrength,
    WorldState,
    decide_subsidized,
    decide_unsubsidized,
    posterior_world_A,
    sample_signal,
    signal_likelihood,
)
from .rng import CounterRng, mix64
from .subsidy import (
    SubsidyQuote,
    likelihood_ratio,
    quote,
    subsidy_amount,
    subsidy_bounds,
)
from .walk import InformativeCounts, Phase, is_informative, phase, update_counts

__version__ = "0.1.0"
