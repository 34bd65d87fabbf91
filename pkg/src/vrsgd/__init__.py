"""Variance-reduced stochastic gradient solvers for composite ERM.

The package is organized as: `data` (sparse/dense datasets, LIBSVM I/O,
seeded sampling, synthetic generators), `model` (losses, regularizers,
objectives), `estimator` (anchored and table-based gradient estimators),
`prox` (proximal maps), `solvers` (the optimization algorithms), `lazy`
(just-in-time sparse coordinate updates), `diagnostics` (oracles, rate
bounds, gradient checks), and `bench` (experiment harness and CLI).
"""

from .data import (
    Dataset,
    ParseError,
    SamplingScheme,
    gen_synthetic,
    load_libsvm,
    make_rng,
    normalize_rows,
    parse_libsvm,
    sample_index,
    sample_minibatch,
    save_libsvm,
    serialize_libsvm,
    uniform_scheme,
    weighted_scheme,
)
from .model import (
    LOSS_KINDS,
    LossFamily,
    Objective,
    Regularizer,
    component_gradient,
    component_value,
    elastic_net,
    l1_reg,
    l2_reg,
    loss_family,
    make_objective,
    no_reg,
    objective_value,
    smooth_value,
    smoothness_constant,
)
from .estimator import (
    EstimatorState,
    SagaState,
    delta_b,
    full_gradient,
    minibatch_estimate,
    saga_estimate_and_update,
    svrg_estimate,
)
from .prox import ProxSpec, prox_apply, prox_optimality_residual, soft_threshold
from .lazy import LazyVector, affine_orbit_sum, replay_affine
from .solvers import (
    RunRecord,
    SolverConfig,
    epoch_lengths,
    final_output_select,
    learning_rate,
    run_deterministic,
    run_eigen,
    run_katyusha,
    run_momentum_vr_sgd,
    run_prox_svrg,
    run_saga,
    run_solver,
    run_svrg,
    run_vr_sgd,
    run_vr_sgd_pp,
    snapshot_update,
)
from .diagnostics import (
    RateReport,
    VarianceReport,
    assumption_c_estimate,
    eigen_oracle,
    finite_diff_grad,
    prox_grid_oracle,
    ridge_closed_form,
    theoretical_rate_sc,
    variance_bound_report,
)
from .bench import (
    ExperimentConfig,
    cli_main,
    emit_csv,
    load_experiment_config,
    parse_experiment_config,
    parse_trace_csv,
    passes_to_tolerance,
    run_experiment,
    seconds_to_tolerance,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset", "ParseError", "SamplingScheme", "gen_synthetic",
    "load_libsvm", "make_rng", "normalize_rows", "parse_libsvm",
    "sample_index", "sample_minibatch", "save_libsvm", "serialize_libsvm",
    "uniform_scheme", "weighted_scheme",
    "LOSS_KINDS", "LossFamily", "Objective", "Regularizer",
    "component_gradient", "component_value", "elastic_net", "l1_reg",
    "l2_reg", "loss_family", "make_objective", "no_reg", "objective_value",
    "smooth_value", "smoothness_constant",
    "EstimatorState", "SagaState", "delta_b", "full_gradient",
    "minibatch_estimate", "saga_estimate_and_update", "svrg_estimate",
    "ProxSpec", "prox_apply", "prox_optimality_residual", "soft_threshold",
    "LazyVector", "affine_orbit_sum", "replay_affine",
    "RunRecord", "SolverConfig", "epoch_lengths", "final_output_select",
    "learning_rate", "run_deterministic", "run_eigen", "run_katyusha",
    "run_momentum_vr_sgd", "run_prox_svrg", "run_saga", "run_solver",
    "run_svrg", "run_vr_sgd", "run_vr_sgd_pp", "snapshot_update",
    "RateReport", "VarianceReport", "assumption_c_estimate", "eigen_oracle",
    "finite_diff_grad", "prox_grid_oracle", "ridge_closed_form",
    "theoretical_rate_sc", "variance_bound_report",
    "ExperimentConfig", "cli_main", "emit_csv", "load_experiment_config",
    "parse_experiment_config", "parse_trace_csv", "passes_to_tolerance",
    "run_experiment", "seconds_to_tolerance",
    "__version__",
]
