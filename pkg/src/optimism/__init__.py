"""Expected optimism and effective degrees of freedom for regularized
regression: closed forms, Monte Carlo estimators, and the scenario suite
showing that more regularization can increase degrees of freedom.
"""

from .core import (
    DesignMatrix,
    NoiseModel,
    OptimismEstimate,
    as_observation_vector,
    df_from_optimism,
    draw,
    draw_block,
    optimism_from_df,
    training_error,
)
from .estimators import (
    ErrorEstimate,
    EstimatorError,
    FitterHandle,
    McConfig,
    finite_difference_divergence,
    mc_errors,
    mc_optimism_covariance,
    mc_optimism_stein,
    per_coordinate_derivatives,
    per_coordinate_dominance,
)
from .lasso import (
    ConvergenceError,
    LassoSolution,
    constrained_least_squares,
    lasso_constrained,
    lasso_penalized,
    stein_df_constrained,
    stein_df_penalized,
)
from .projections import (
    ProjectionError,
    project_ball,
    project_ellipsoid,
    project_finite_set,
    project_l1_ball,
    project_segment,
    project_subspace,
)
from .rng import RngStream
from .smoothers import (
    RidgeSpec,
    hetero_ridge_optimism,
    ridge_coefficients,
    ridge_df_closed_form,
    ridge_fit,
    smoother_matrix,
    trace_df,
)
from .experiments import (
    SCENARIOS,
    ScenarioResult,
    run_scenario,
)

__version__ = "0.1.0"
