"""Level dependent Choquet integral decision analysis.

Aggregation with interval and piecewise-linear level dependent capacities,
capacity elicitation from decision-maker statements by linear programming,
exact necessary/possible preference relations, and SMAA robustness indices
computed by uniform polytope sampling.
"""

from .model import (
    AltPreference,
    Comprehensive,
    Criterion,
    EvaluationMatrix,
    EvaluationRange,
    FullRanking,
    ImportanceComparison,
    InteractionSign,
    IntervalIndex,
    LevelDependentCapacity,
    MobiusCapacity,
    Problem,
    Scale,
    ValidationReport,
    mobius_to_capacity,
    validate,
)
from .choquet import (
    capacity_at_level,
    choquet,
    ildc,
    ldc_evaluate,
    ldc_quadrature_oracle,
    pldc,
    slice_evaluations,
)
from .indices import (
    ImportanceProfile,
    InteractionProfile,
    importance_profile,
    interaction,
    interaction_profile,
    shapley,
)
from .lp import (
    Constraint,
    DegenerateBasisError,
    EmptyPolytopeError,
    LinearProgram,
    LPSolution,
    chebyshev_center,
    nullspace_basis,
    solve,
)
from .elicitation import (
    CapacityLayout,
    CompatibilityResult,
    ConstraintSystem,
    IncompatiblePreferencesError,
    RorResult,
    build_edm,
    check_compatibility,
    diagnose_incompatibility,
    explain_full_ranking,
    ror,
)
from .smaa import (
    SamplerConfig,
    SmaaResult,
    expected_ranking,
    expected_scores,
    har_sample,
    rank_by_expected,
    smaa_indices,
    smaa_run,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
