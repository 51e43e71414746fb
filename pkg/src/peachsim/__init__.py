"""Low-complexity polynomial channel estimation for large-scale MIMO.

Exact Bayesian MMSE / MVU / diagonalized baselines next to truncated
polynomial-expansion estimators with optimized per-term weights, their
closed-form MSE and high-power floors, sliding-window weight tracking,
shrinkage covariance estimation, FLOP cost models, and a seeded simulation
CLI with CSV output.
"""

from .adaptive import (
    AdaptiveState,
    ShrinkageEstimate,
    adaptive_init,
    adaptive_update,
    shrinkage_covariance,
    shrinkage_kappa,
)
from .analysis import (
    ContaminatedFloors,
    FlopModel,
    NoiseLimitedFloors,
    crossover_m,
    floor_contaminated,
    floor_noise_limited,
    flops,
    normalized_mse,
    sinr,
)
from .cli import (
    DEFAULT_CORRELATION,
    ExperimentConfig,
    ResultRow,
    SpatialCorrelation,
    correlated_model,
    default_config,
    run_experiment,
    run_monte_carlo,
)
from .estimators import (
    EstimatorKind,
    PolyEstimator,
    WeightSystem,
    alpha_gershgorin,
    alpha_optimal,
    alpha_trace,
    default_alpha_w,
    diag_estimate,
    diag_mse,
    estimate,
    linear_filter_mse,
    make_mvu_peach,
    make_mvu_wpeach,
    make_peach,
    make_wpeach,
    mmse_estimate,
    mmse_filter_matrix,
    mmse_mse,
    mvu_estimate,
    mvu_peach_estimate,
    mvu_variance,
    peach_as_wpeach_weights,
    peach_estimate,
    peach_mse,
    poly_filter_matrix,
    wpeach_estimate,
    wpeach_mse_general,
    wpeach_mse_optimal,
    wpeach_weight_system,
    wpeach_weights_optimal,
    z_matrix,
)
from .model import (
    ContaminationSpec,
    Dims,
    StatModel,
    build_stat_model,
    deviation,
    exp_correlation_matrix,
    kronecker,
    observe,
    sample_gaussian,
    spawn_streams,
    stat_model_from_pilot,
)

__version__ = "0.1.0"
