"""Robust estimation of a scalar mean via a truncated centering equation.

The estimate is the root theta of

    sum_i psi(alpha * (x_i - theta)) = 0,

found by bisection: the left side is non-increasing in theta (psi is
non-decreasing), non-negative at theta = min(x) and non-positive at
theta = max(x), so a root interval always exists inside the data range.
On a plateau of roots (possible with the saturating transform) the
interval midpoint is returned.
"""

from __future__ import annotations

import math

import numpy as np

from .truncation import LOG_QUADRATIC, psi

DEFAULT_MAX_ITER = 200


def catoni_alpha(n: int, variance: float, delta: float | None = None) -> float:
    """Scale parameter sqrt(2 / (n * variance)).

    With ``delta`` given, the numerator 2 is replaced by the confidence
    scaling 2 * log(1 / delta); delta = 1/e recovers the default.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (variance > 0 and math.isfinite(variance)):
        raise ValueError("variance must be positive and finite")
    top = 2.0 if delta is None else 2.0 * math.log(1.0 / _checked_delta(delta))
    return math.sqrt(top / (n * variance))


def _checked_delta(delta: float) -> float:
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    return delta


def catoni_mean(
    values,
    kind: str = LOG_QUADRATIC,
    alpha: float | None = None,
    variance: float | None = None,
    tol: float | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """Robust mean of a 1-D sample.

    Parameters
    ----------
    values : array-like, shape (n,)
        Observations; must be non-empty and finite.
    kind : str
        Truncation variant, 'saturating' or 'log_quadratic'.
    alpha : float, optional
        Scale of the centering equation.  Defaults to
        ``catoni_alpha(n, variance)``.
    variance : float, optional
        Variance plug-in used when ``alpha`` is absent; defaults to the
        unbiased sample variance.
    tol : float, optional
        Bisection interval width at convergence; defaults to
        1e-10 * (max - min).
    max_iter : int
        Bisection iteration cap.

    Returns
    -------
    float
        The estimated mean, always inside [min(values), max(values)].
    """
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("values must be non-empty")
    if not np.all(np.isfinite(x)):
        raise ValueError("values must be finite")
    if x.size == 1:
        return float(x[0])

    lo = float(x.min())
    hi = float(x.max())
    if lo == hi:
        return lo

    if alpha is None:
        if variance is None:
            variance = float(np.var(x, ddof=1))
        if variance <= 0.0:
            return float(np.mean(x))
        alpha = catoni_alpha(x.size, variance)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError("alpha must be positive and finite")
    if tol is None:
        tol = 1e-10 * (hi - lo)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")

    def centering(theta: float) -> float:
        return float(np.sum(psi(alpha * (x - theta), kind)))

    # The centering sum is non-increasing, strictly positive at lo and
    # strictly negative at hi (the all-equal case returned above), so the
    # root set is a closed interval inside (lo, hi).  The saturating
    # transform can make that interval wide (a plateau of roots); locate
    # both edges and return the midpoint.
    if centering(lo) < 0 or centering(hi) > 0:
        raise RuntimeError("bisection bracket violated; non-monotone centering sum")

    def edge(keep_left) -> float:
        a, b = lo, hi
        for _ in range(max_iter):
            if b - a <= tol:
                break
            mid = 0.5 * (a + b)
            if keep_left(centering(mid)):
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    left = edge(lambda value: value > 0.0)  # converges to inf{theta : f(theta) <= 0}
    right = edge(lambda value: value >= 0.0)  # converges to sup{theta : f(theta) >= 0}
    return 0.5 * (left + right)
