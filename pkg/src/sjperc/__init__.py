"""Directed first-passage percolation with a Bernoulli switch field.

Exact min-plus dynamic programming for the switched model and its two
one-sided (horizontal/vertical) variants, closed-form limit shapes and
fluctuation coefficients, the boundary-flip identity check, the random
walk web, and reproducible Monte Carlo experiments against the
Tracy-Widom GUE reference.
"""

from .env import (
    ArrayEnvironment,
    ConfigurationError,
    DistributionSpec,
    EnvironmentConfig,
    WeightEnvironment,
    edge_weight,
    sample_environment,
    sample_value,
)
from .fpp import (
    Geodesic,
    IncrementGrids,
    ValueGrid,
    Variant,
    brute_force_value,
    departure_point,
    entry_point,
    first_passage_between,
    first_passage_grid,
    geodesic,
    increments,
)
from .lemma import negate_boundary, upper_bound_check, verify_identity
from .mc import (
    ExperimentSpec,
    FluctuationSummary,
    SampleRecord,
    ks_statistic,
    run_experiment,
    tw_reference,
    two_sample_ks,
)
from .shape import (
    ShapeCoefficients,
    chi_from_curvature,
    coefficients,
    critical_slope,
    limit_shape_bernoulli,
    limit_shape_model,
    prob_zero_exact,
    scaled_fluctuation,
)
from .web import WebGraph, build_web, export_web, jump_distance

__version__ = "0.1.0"
