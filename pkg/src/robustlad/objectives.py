"""Objective functions and their (sub)gradients.

The centerpiece is the truncated absolute-loss objective

    F(w) = (1 / (n * alpha)) * sum_i psi(alpha * |y_i - x_i @ w|),

whose per-sample terms are quasiconvex in w.  Also provided: the plain
absolute-loss subgradient for constrained ERM, and the truncated
min-max payoff used by the squared-loss baseline.  Gradients are
almost-everywhere gradients with the convention sign(0) = 0; solvers
handle the non-smooth points explicitly.
"""

from __future__ import annotations

import numpy as np

from .data import check_features_target, check_weights
from .truncation import SATURATING, _check_kind, _magnitude, _slope


def _check_alpha(alpha: float) -> float:
    if not (alpha > 0 and np.isfinite(alpha)):
        raise ValueError("alpha must be positive and finite")
    return float(alpha)


def truncated_l1_value(X, y, w, alpha: float, kind: str = "log_quadratic"):
    """Truncated absolute-loss objective at ``w``.

    ``w`` may be a single (d,) vector or an (m, d) batch; the batch form
    returns an array of m values.
    """
    X, y = check_features_target(X, y)
    w = check_weights(w, X.shape[1])
    alpha = _check_alpha(alpha)
    _check_kind(kind)
    if w.ndim == 1:
        r = y - X @ w
        return float(np.mean(_magnitude(alpha * np.abs(r), kind)) / alpha)
    r = y[np.newaxis, :] - w @ X.T
    return _magnitude(alpha * np.abs(r), kind).mean(axis=1) / alpha


def truncated_l1_gradient(X, y, w, alpha: float, kind: str = "log_quadratic") -> np.ndarray:
    """Almost-everywhere gradient of :func:`truncated_l1_value`."""
    X, y = check_features_target(X, y)
    w = check_weights(w, X.shape[1])
    alpha = _check_alpha(alpha)
    _check_kind(kind)
    r = y - X @ w
    scale = _slope(alpha * np.abs(r), kind) * np.sign(r)
    return -(X.T @ scale) / X.shape[0]


def erm_l1_subgradient(X, y, w) -> np.ndarray:
    """A subgradient of the empirical absolute-loss risk (sign(0) = 0)."""
    X, y = check_features_target(X, y)
    w = check_weights(w, X.shape[1])
    return -(X.T @ np.sign(y - X @ w)) / X.shape[0]


def _minmax_payoff_core(X, y, w, u, lam: float, alpha: float) -> float:
    rw = y - X @ w
    ru = y - X @ u
    arg = alpha * (rw * rw - ru * ru)
    core = np.mean(np.sign(arg) * _magnitude(np.abs(arg), SATURATING)) / alpha
    return float(lam * (w @ w - u @ u) + core)


def _minmax_gradients_core(X, y, w, u, lam: float, alpha: float):
    rw = y - X @ w
    ru = y - X @ u
    slope = _slope(alpha * np.abs(rw * rw - ru * ru), SATURATING)
    n = X.shape[0]
    grad_w = 2.0 * lam * w - 2.0 * (X.T @ (slope * rw)) / n
    grad_u = -2.0 * lam * u + 2.0 * (X.T @ (slope * ru)) / n
    return grad_w, grad_u


def _check_minmax_args(X, y, w, u, lam, alpha):
    X, y = check_features_target(X, y)
    d = X.shape[1]
    w = check_weights(w, d)
    u = check_weights(u, d)
    _check_alpha(alpha)
    if lam < 0 or not np.isfinite(lam):
        raise ValueError("lam must be non-negative and finite")
    return X, y, w, u


def minmax_l2_payoff(X, y, w, u, lam: float, alpha: float) -> float:
    """Truncated min-max squared-loss payoff; w minimizes, u maximizes.

    Uses the saturating truncation, which is the variant the min-max
    formulation is defined with.  Antisymmetric in (w, u) when lam = 0
    and zero on the diagonal w = u for any lam.
    """
    X, y, w, u = _check_minmax_args(X, y, w, u, lam, alpha)
    return _minmax_payoff_core(X, y, w, u, lam, alpha)


def minmax_l2_gradients(X, y, w, u, lam: float, alpha: float):
    """(grad_w, grad_u) of :func:`minmax_l2_payoff`."""
    X, y, w, u = _check_minmax_args(X, y, w, u, lam, alpha)
    return _minmax_gradients_core(X, y, w, u, lam, alpha)
