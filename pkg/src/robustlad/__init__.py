"""Robust absolute-loss linear regression for heavy-tailed data.

Estimation via a truncated empirical objective with theory-prescribed
scale, plus baselines (plain constrained ERM, exact constrained least
squares, a truncated min-max squared-loss estimator, and a robust
scalar mean), closed-form excess-risk bounds, synthetic heavy-tailed
tasks with measurable excess risk, and a reproducible Monte Carlo
harness for checking rates and bound coverage.
"""

from .bounds import default_alpha, erm_excess_bound, log_covering_ball, truncated_excess_bound
from .catoni import catoni_alpha, catoni_mean
from .data import (
    empirical_risk,
    load_dataset,
    moment_diagnostics,
    pointwise_loss,
    project_to_ball,
    save_dataset,
)
from .estimators import BallLeastSquares, LADRegressor, MinMaxL2Regressor, TruncatedLADRegressor
from .experiments import (
    EstimatorSpec,
    ExperimentSpec,
    RiskMethod,
    TrialResult,
    coverage_check,
    emit,
    experiment_spec_from_dict,
    fit_loglog_slope,
    run_trials,
    scaling_summary,
)
from .objectives import (
    erm_l1_subgradient,
    minmax_l2_payoff,
    truncated_l1_gradient,
    truncated_l1_value,
)
from .solvers import (
    SolveReport,
    SolverConfig,
    grid_search,
    solve_erm_l1,
    solve_erm_l2,
    solve_minmax_l2,
    solve_truncated_l1,
)
from .synth import (
    CenteredLogNormalNoise,
    GaussianInput,
    GaussianNoise,
    ParetoRadialInput,
    RiskEvaluation,
    StudentTNoise,
    SymmetricParetoNoise,
    TaskSpec,
    UniformBallInput,
    excess_l1_risk,
    generate,
    true_l1_risk,
)
from .truncation import (
    LOG_QUADRATIC,
    SATURATING,
    TRUNCATION_KINDS,
    envelope_holds,
    psi,
    psi_derivative,
    psi_envelope,
)

__version__ = "0.1.0"

__all__ = [
    "BallLeastSquares",
    "CenteredLogNormalNoise",
    "EstimatorSpec",
    "ExperimentSpec",
    "GaussianInput",
    "GaussianNoise",
    "LADRegressor",
    "LOG_QUADRATIC",
    "MinMaxL2Regressor",
    "ParetoRadialInput",
    "RiskEvaluation",
    "RiskMethod",
    "SATURATING",
    "SolveReport",
    "SolverConfig",
    "StudentTNoise",
    "SymmetricParetoNoise",
    "TaskSpec",
    "TrialResult",
    "TruncatedLADRegressor",
    "TRUNCATION_KINDS",
    "UniformBallInput",
    "catoni_alpha",
    "catoni_mean",
    "coverage_check",
    "default_alpha",
    "emit",
    "empirical_risk",
    "envelope_holds",
    "erm_excess_bound",
    "erm_l1_subgradient",
    "excess_l1_risk",
    "experiment_spec_from_dict",
    "fit_loglog_slope",
    "generate",
    "grid_search",
    "load_dataset",
    "log_covering_ball",
    "minmax_l2_payoff",
    "moment_diagnostics",
    "pointwise_loss",
    "project_to_ball",
    "psi",
    "psi_derivative",
    "psi_envelope",
    "run_trials",
    "save_dataset",
    "scaling_summary",
    "solve_erm_l1",
    "solve_erm_l2",
    "solve_minmax_l2",
    "solve_truncated_l1",
    "true_l1_risk",
    "truncated_excess_bound",
    "truncated_l1_gradient",
    "truncated_l1_value",
]
