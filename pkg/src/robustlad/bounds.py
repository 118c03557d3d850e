"""Closed-form scale choices and excess-risk bounds.

The covering-number term uses the standard volume-comparison bound for
a Euclidean ball of the given radius: log N <= d * log(6 * radius /
epsilon), clamped at 0 since covering numbers are at least 1.  The
net radius epsilon defaults to 1/n throughout.
"""

from __future__ import annotations

import math


def _check_positive(name: str, value: float) -> float:
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value}")
    return float(value)


def log_covering_ball(d: int, radius: float, epsilon: float) -> float:
    """Upper bound on the log covering number of the radius-ball at scale epsilon."""
    if d < 1:
        raise ValueError("d must be >= 1")
    _check_positive("radius", radius)
    _check_positive("epsilon", epsilon)
    return max(0.0, d * math.log(6.0 * radius / epsilon))


def default_alpha(n: int, d: int, radius: float, delta: float, epsilon: float | None = None) -> float:
    """Theory-prescribed truncation scale sqrt(log(N / delta^2) / n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 < delta < 0.5):
        raise ValueError("delta must lie in (0, 1/2)")
    if epsilon is None:
        epsilon = 1.0 / n
    log_n_cover = log_covering_ball(d, radius, epsilon)
    return math.sqrt((log_n_cover + 2.0 * math.log(1.0 / delta)) / n)


def truncated_excess_bound(
    n: int,
    d: int,
    radius: float,
    delta: float,
    mean_norm: float,
    mean_sq_norm: float,
    sup_l2_risk: float,
    epsilon: float | None = None,
    alpha: float | None = None,
) -> float:
    """High-probability (1 - 2*delta) excess-risk bound for the truncated estimator.

    With ``alpha`` given, evaluates the general form

        2*eps*E||x|| + alpha*eps^2*E||x||^2 + (3*alpha/2)*sup_R
        + log(N/delta^2) / (n*alpha);

    with ``alpha`` omitted, the scale from :func:`default_alpha` is
    plugged in, which collapses the last three terms to
    sqrt(log(N/delta^2)/n) * (eps^2*E||x||^2 + 1.5*sup_R + 1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 < delta < 0.5):
        raise ValueError("delta must lie in (0, 1/2)")
    for name, value in (("mean_norm", mean_norm), ("mean_sq_norm", mean_sq_norm), ("sup_l2_risk", sup_l2_risk)):
        if value < 0:
            raise ValueError(f"{name} must be non-negative")
    if epsilon is None:
        epsilon = 1.0 / n
    _check_positive("epsilon", epsilon)
    log_term = log_covering_ball(d, radius, epsilon) + 2.0 * math.log(1.0 / delta)
    if alpha is None:
        alpha = math.sqrt(log_term / n)
    _check_positive("alpha", alpha)
    return (
        2.0 * epsilon * mean_norm
        + alpha * epsilon * epsilon * mean_sq_norm
        + 1.5 * alpha * sup_l2_risk
        + log_term / (n * alpha)
    )


def erm_excess_bound(radius: float, input_bound: float, n: int, delta: float) -> float:
    """High-probability (1 - delta) ERM excess-risk bound under bounded inputs.

    Evaluates (4 * radius * input_bound / sqrt(n)) * (1 + sqrt(log(1/delta) / 2)).
    """
    _check_positive("radius", radius)
    _check_positive("input_bound", input_bound)
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    return (4.0 * radius * input_bound / math.sqrt(n)) * (1.0 + math.sqrt(0.5 * math.log(1.0 / delta)))
