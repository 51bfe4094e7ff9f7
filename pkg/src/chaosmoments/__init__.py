"""
Moment and cumulant calculus for second-order Gaussian and free chaos.

Elements are described by their spectral coefficients; from them the
package computes classical or free cumulants and moments, evaluates the
fourth-moment type criteria against the normal-product and tetilla laws,
solves constrained moment problems, and checks everything by Monte Carlo
and random matrices.
"""

from .criteria import (
    EQUALITY,
    HOLDS,
    VIOLATED,
    CriterionReport,
    characterization_check,
    coupling_distance,
    cumulant_ladder_report,
    delta_gap,
    delta_gap_spectral,
    dominant_pair_detect,
    hypercontractivity_report,
    moment_gap_ratio_report,
    moment_lower_bound_report,
    polynomial_identity_check,
    symmetric_upper_bound_report,
    target_coupling_distance_squared,
    w2_bound_shape,
    w2_gap,
)
from .errors import (
    CapacityError,
    ChaosError,
    InvalidInputError,
    PreconditionError,
    UnsupportedKindError,
)
from .moments import (
    cumulants_from_moments,
    moments_from_coefficients,
    moments_from_cumulants,
    target_cumulants,
    target_moments,
)
from .montecarlo import (
    SampleBatch,
    empirical_moments,
    empirical_wasserstein2,
    gue_free_moment_estimate,
    gue_free_moments,
    sample_classical,
)
from .optimize import (
    OptimizationProblem,
    OptimizationResult,
    evaluate_problem,
    minimize_fourth_moment,
)
from .partitions import (
    NonCrossingPartition,
    SetPartition,
    bell_number,
    catalan_number,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
    partition_counts,
)
from .spectral import (
    ChaosKind,
    CoefficientSequence,
    CumulantSequence,
    MomentSequence,
    canonicalize,
    cumulants_from_coefficients,
    target_coefficients,
)

__version__ = "0.1.0"
