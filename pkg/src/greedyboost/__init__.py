"""Greedy stagewise boosting with restricted step sizes over one-dimensional stumps."""

from .basis import SignedStump, candidate_thresholds, stump_eval
from .boosting import (
    TRACE_HEADER,
    BoostConfig,
    Ensemble,
    RunTrace,
    StepSchedule,
    energy_ledger,
    ensemble_predict,
    exact_line_search,
    greedy_step,
    run_boost,
)
from .bounds import (
    BoundInputs,
    cor43_bound,
    default_eps_bar,
    fit_rademacher_constant,
    lemma42_bound,
    lemma42_curve,
    rademacher_exact,
    rademacher_mc,
    thm32_bound,
    thm33_bound,
    thm33_delta,
    uniform_dev_bound,
)
from .config import RunConfig, parse_config
from .errors import (
    BoostError,
    ConfigError,
    DegenerateDirection,
    DomainError,
    EmptyDataset,
    NumericFailure,
    PreconditionError,
    Unbounded,
)
from .experiments import SUMMARY_HEADER, SummaryRow, derive_seed, run_single, sweep
from .losses import (
    LossSpec,
    auxiliary_psi,
    curvature_bound,
    lipschitz_bound,
    loss_derivative,
    loss_value,
)
from .margin import MarginInstance, margin_error, margin_run, max_l1_margin
from .stopping import (
    StoppingRule,
    cv_stop,
    cv_stop_trace,
    oracle_stop,
    rho_budget,
    select_budget,
    theory_budget,
)
from .synth import (
    BAYES_ERROR,
    Dataset,
    TargetModel,
    bayes_error,
    sample,
    target_probability,
    true_class_error,
    true_excess_convex,
    true_risk,
)

__all__ = [name for name in dir() if not name.startswith("_")]
