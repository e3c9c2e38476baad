"""quantplan: pick one quantization level per model of an inference pipeline.

Solves the two-objective assignment exactly (maximize the accuracy sum,
minimize the latency sum), enumerates the full Pareto front, and emits
reports, CSV, and scatter figures from measured profiles.
"""

from .domain import (
    Assignment,
    CANONICAL_BITS,
    DEFAULT_SEARCH_LEVELS,
    FP32,
    LevelSet,
    MeasuredPoint,
    ModelProfile,
    ObjectiveVector,
    ParetoFront,
    PipelineProfile,
    QuantLevel,
    Thresholds,
    dominates,
)
from .objective import (
    NormalizedPoint,
    feasible_levels,
    min_max_normalize,
    model_score,
    objective_of,
    pipeline_accuracy,
    speedup,
)
from .solver import (
    BudgetInfeasibleError,
    InfeasibleModelError,
    OracleCapExceededError,
    SolveRequest,
    SolveResult,
    brute_force_front,
    pareto_front_dp,
    solve,
    solve_budget,
    solve_weighted,
)
from .ingest import (
    PlanReport,
    ProfileError,
    build_report,
    emit_pareto_csv,
    emit_profile,
    emit_report,
    emit_scatter_svg,
    parse_profile,
)
from .synth import SynthConfig, generate_profiles

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BudgetInfeasibleError",
    "CANONICAL_BITS",
    "DEFAULT_SEARCH_LEVELS",
    "FP32",
    "InfeasibleModelError",
    "LevelSet",
    "MeasuredPoint",
    "ModelProfile",
    "NormalizedPoint",
    "ObjectiveVector",
    "OracleCapExceededError",
    "ParetoFront",
    "PipelineProfile",
    "PlanReport",
    "ProfileError",
    "QuantLevel",
    "SolveRequest",
    "SolveResult",
    "SynthConfig",
    "Thresholds",
    "brute_force_front",
    "build_report",
    "dominates",
    "emit_pareto_csv",
    "emit_profile",
    "emit_report",
    "emit_scatter_svg",
    "feasible_levels",
    "generate_profiles",
    "min_max_normalize",
    "model_score",
    "objective_of",
    "pareto_front_dp",
    "parse_profile",
    "pipeline_accuracy",
    "solve",
    "solve_budget",
    "solve_weighted",
    "speedup",
]
