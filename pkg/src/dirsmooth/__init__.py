"""Directional-smoothness toolkit: smoothness functions between point pairs,
step-size rules adapted to them, the gradient-descent variants they analyze,
and evaluators for the matching path-dependent sub-optimality bounds."""

from .exceptions import (
    ConfigError,
    CoincidentPointsError,
    DataFormatError,
    DimensionMismatchError,
    DirsmoothError,
    HypothesisError,
    MissingMetricsError,
    OptimizationRunError,
    RayMinimizationError,
    ReferenceSolveError,
    SeparableDataError,
    StepSizeError,
    UnsupportedObjectiveError,
)
from .problems import (
    IngestOptions,
    LogisticObjective,
    Objective,
    QuadraticObjective,
    ReferenceSolution,
    compute_reference_solution,
    default_x0,
    load_dataset_csv,
    make_power_law_quadratic,
    make_synthetic_logistic,
)
from .smoothness import (
    ChordConfig,
    DirectionalMu,
    SmoothnessEstimate,
    SmoothnessKind,
    directional_mu,
    estimate,
    optimal_H,
    path_wise_A,
    point_wise_D,
)
from .stepsizes import (
    Anytime,
    CauchyStep,
    ConstantStep,
    DaiStep,
    FixedHorizon,
    InverseLStep,
    PolyakStep,
    RootSolveConfig,
    StepSizeRule,
    StronglyAdaptedStep,
    cauchy_step,
    dai_step,
    normalized_schedule_step,
    polyak_step,
    solve_strongly_adapted,
)
from .optimizers import (
    ExpSearchResult,
    IterateRecord,
    RunOptions,
    Trace,
    agd_estimating_run,
    agd_momentum_run,
    alpha0_from_gamma0,
    exponential_search_gd,
    gd_run,
    normalized_gd_run,
)
from .bounds import (
    BoundSeries,
    DominanceReport,
    bound_agd,
    bound_classic_L,
    bound_convex_avg,
    bound_ngd,
    bound_polyak,
    bound_polyak_alternate,
    bound_sc_iterates,
    bound_sc_split,
    dominance_report,
    polyak_curvature_constant,
)

__version__ = "0.1.0"
