"""Scikit-learn style wrappers around the ball-constrained solvers.

These follow the usual estimator contract: constructor arguments are
stored verbatim, fitting happens in ``fit`` which sets trailing-
underscore attributes (``coef_``, ``alpha_``, ``report_``), and
``predict`` applies the fitted linear map.  ``get_params`` /
``set_params`` come from ``BaseEstimator``, so the regressors compose
with pipelines, grid search, and cross-validation.

None of the models fit an intercept: the predictor is exactly
x @ coef_ with ||coef_|| bounded by ``radius``.  Append a constant
feature if an intercept is wanted.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .bounds import default_alpha
from .data import empirical_risk
from .solvers import SolverConfig, solve_erm_l1, solve_erm_l2, solve_minmax_l2, solve_truncated_l1
from .truncation import LOG_QUADRATIC


class _BallRegressorMixin(RegressorMixin, BaseEstimator):
    def _validate_fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        self.n_features_in_ = X.shape[1]
        return np.asarray(X, dtype=float), np.asarray(y, dtype=float)

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.coef_


class LADRegressor(_BallRegressorMixin):
    """Least-absolute-deviation regression over a coefficient ball.

    Fit by projected subgradient descent; suitable when inputs are
    bounded, in which case its excess risk admits a dimension-free
    high-probability bound.

    Parameters
    ----------
    radius : float
        Euclidean bound on the coefficient vector.
    iterations : int
        Subgradient steps.
    step_scale : float, optional
        Step numerator; defaults to ``radius``.
    seed : int
        Reserved for API symmetry; this solver is deterministic.
    """

    def __init__(self, radius=1.0, iterations=2000, step_scale=None, seed=0):
        self.radius = radius
        self.iterations = iterations
        self.step_scale = step_scale
        self.seed = seed

    def _config(self):
        return SolverConfig(
            iterations=self.iterations,
            restarts=1,
            step_scale=self.step_scale,
            seed=self.seed,
        )

    def fit(self, X, y):
        X, y = self._validate_fit(X, y)
        report = solve_erm_l1(X, y, self.radius, self._config())
        self.coef_ = report.weights
        self.report_ = report
        return self


class TruncatedLADRegressor(_BallRegressorMixin):
    """Absolute-loss regression with a truncated objective for heavy tails.

    Minimizes the soft-truncated empirical absolute loss over the
    coefficient ball via multi-start normalized gradient descent.  With
    ``alpha='auto'`` the truncation scale follows the covering-number
    prescription sqrt(log(N / delta^2) / n), which yields a
    high-probability excess-risk guarantee of order sqrt(d log n / n)
    under second-moment conditions only, heavy-tailed inputs and
    outputs included.

    Parameters
    ----------
    radius : float
        Euclidean bound on the coefficient vector.
    alpha : 'auto' or float
        Truncation scale.
    truncation : str
        'log_quadratic' (default; strictly increasing, no flat
        gradient) or 'saturating'.
    delta : float
        Confidence parameter in (0, 1/2) used when alpha='auto'.
    epsilon : float, optional
        Net radius in the covering term; defaults to 1/n.
    iterations, restarts, step_scale, seed :
        Multi-start solver budget; see ``SolverConfig``.

    Attributes
    ----------
    coef_ : ndarray
        Fitted coefficients, ||coef_|| <= radius.
    alpha_ : float
        Truncation scale actually used.
    report_ : SolveReport
        Solver diagnostics, including the saturation fraction.
    """

    def __init__(
        self,
        radius=1.0,
        alpha="auto",
        truncation=LOG_QUADRATIC,
        delta=0.05,
        epsilon=None,
        iterations=2000,
        restarts=16,
        step_scale=None,
        seed=0,
    ):
        self.radius = radius
        self.alpha = alpha
        self.truncation = truncation
        self.delta = delta
        self.epsilon = epsilon
        self.iterations = iterations
        self.restarts = restarts
        self.step_scale = step_scale
        self.seed = seed

    def fit(self, X, y):
        X, y = self._validate_fit(X, y)
        n, d = X.shape
        if self.alpha == "auto":
            self.alpha_ = default_alpha(n, d, self.radius, self.delta, self.epsilon)
        else:
            self.alpha_ = float(self.alpha)
        config = SolverConfig(
            iterations=self.iterations,
            restarts=self.restarts,
            step_scale=self.step_scale,
            seed=self.seed,
        )
        report = solve_truncated_l1(X, y, self.radius, self.alpha_, self.truncation, config)
        self.coef_ = report.weights
        self.report_ = report
        self.saturation_fraction_ = report.saturation_fraction
        return self


class MinMaxL2Regressor(_BallRegressorMixin):
    """Truncated min-max squared-loss baseline.

    Solved by simultaneous projected gradient descent-ascent; the
    fitted report carries a pool certificate (max payoff of the final
    coefficients against a pool of adversaries) as an approximate
    optimality measure.
    """

    def __init__(
        self,
        radius=1.0,
        lam=0.0,
        alpha="auto",
        delta=0.05,
        iterations=2000,
        restarts=16,
        step_scale=None,
        seed=0,
    ):
        self.radius = radius
        self.lam = lam
        self.alpha = alpha
        self.delta = delta
        self.iterations = iterations
        self.restarts = restarts
        self.step_scale = step_scale
        self.seed = seed

    def fit(self, X, y):
        X, y = self._validate_fit(X, y)
        n, d = X.shape
        if self.alpha == "auto":
            self.alpha_ = default_alpha(n, d, self.radius, self.delta)
        else:
            self.alpha_ = float(self.alpha)
        config = SolverConfig(
            iterations=self.iterations,
            restarts=self.restarts,
            step_scale=self.step_scale,
            seed=self.seed,
        )
        report, adversary = solve_minmax_l2(X, y, self.radius, self.lam, self.alpha_, config)
        self.coef_ = report.weights
        self.adversary_ = adversary
        self.certificate_ = report.certificate
        self.report_ = report
        return self


class BallLeastSquares(_BallRegressorMixin):
    """Exact least squares constrained to a coefficient ball."""

    def __init__(self, radius=1.0):
        self.radius = radius

    def fit(self, X, y):
        X, y = self._validate_fit(X, y)
        self.coef_ = solve_erm_l2(X, y, self.radius)
        self.training_risk_ = float(empirical_risk(X, y, self.coef_, loss="l2"))
        return self
