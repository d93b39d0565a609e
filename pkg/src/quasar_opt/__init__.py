"""quasar_opt: the QUASAR evolutionary optimizer, a DE baseline, a
shifted/rotated benchmark suite, comparison statistics and an experiment
harness. NumPy/SciPy only."""

from .core import (
    BoundsBox,
    FunctionObjective,
    ObjectiveFunction,
    OptResult,
    Population,
    RngStream,
    best_of,
    clip_to_bounds,
    rank_population,
)
from .sampling import (
    InitMethod,
    lhs_sample,
    sobol_sample,
    uniform_sample,
)
from .quasar import (
    EliteStats,
    MutationStrategy,
    QuasarConfig,
    StepInfo,
    binomial_crossover,
    compute_elite_stats,
    crossover_rate,
    greedy_select,
    mutate,
    optimize,
    reinit_probability,
    sample_f_global,
    sample_f_local,
    sample_reinit_position,
    select_strategy,
    step,
)
from .de import DeConfig, de_optimize
from .benchmarks import TestFunction, make_function, make_suite, suite_manifest
from .stats import (
    FriedmanResult,
    RuntimeRatios,
    ScenarioResults,
    ScenarioSummary,
    SummaryTable,
    friedman_rank_sums,
    gmerf,
    gmerf_ci,
    gmerf_overall,
    runtime_ratios,
    wilcoxon_signed_rank,
)
from .harness import (
    ExperimentPlan,
    TrialRecord,
    derive_seed,
    emit_summary,
    run_plan,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsBox", "FunctionObjective", "ObjectiveFunction", "OptResult",
    "Population", "RngStream", "best_of", "clip_to_bounds", "rank_population",
    "InitMethod", "lhs_sample", "sobol_sample", "uniform_sample",
    "EliteStats", "MutationStrategy", "QuasarConfig", "StepInfo",
    "binomial_crossover", "compute_elite_stats", "crossover_rate",
    "greedy_select", "mutate", "optimize", "reinit_probability",
    "sample_f_global", "sample_f_local", "sample_reinit_position",
    "select_strategy", "step",
    "DeConfig", "de_optimize",
    "TestFunction", "make_function", "make_suite", "suite_manifest",
    "FriedmanResult", "RuntimeRatios", "ScenarioResults", "ScenarioSummary",
    "SummaryTable", "friedman_rank_sums", "gmerf", "gmerf_ci",
    "gmerf_overall", "runtime_ratios", "wilcoxon_signed_rank",
    "ExperimentPlan", "TrialRecord", "derive_seed", "emit_summary",
    "run_plan",
    "__version__",
]
