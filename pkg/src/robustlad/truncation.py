"""Truncation functions for robust M-estimation.

Two soft-truncation transforms are provided, both odd, non-decreasing,
and pinched between the logarithmic envelopes

    -log(1 - x + x^2/2)  <=  psi(x)  <=  log(1 + x + x^2/2),

which is the condition that makes the Chernoff-style deviation analysis
of the downstream estimators go through.  ``psi_envelope`` exposes the
two envelopes so a candidate transform can be validated directly.
"""

from __future__ import annotations

import math

import numpy as np

SATURATING = "saturating"
LOG_QUADRATIC = "log_quadratic"
TRUNCATION_KINDS = (SATURATING, LOG_QUADRATIC)

_LOG2 = math.log(2.0)


def _check_kind(kind: str) -> str:
    if kind not in TRUNCATION_KINDS:
        raise ValueError(f"unknown truncation kind {kind!r}; expected one of {TRUNCATION_KINDS}")
    return kind


def _as_finite_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("truncation input must be finite")
    return x


def _magnitude(a: np.ndarray, kind: str) -> np.ndarray:
    """psi on non-negative arguments.  No validation; solver hot path."""
    if kind == LOG_QUADRATIC:
        return np.log1p(a + 0.5 * a * a)
    inner = np.minimum(a, 1.0)
    return np.where(a >= 1.0, _LOG2, -np.log1p(-inner + 0.5 * inner * inner))


def _slope(a: np.ndarray, kind: str) -> np.ndarray:
    """Derivative of psi on non-negative arguments.  No validation."""
    if kind == LOG_QUADRATIC:
        return (1.0 + a) / (1.0 + a + 0.5 * a * a)
    inner = np.minimum(a, 1.0)
    return np.where(a >= 1.0, 0.0, (1.0 - inner) / (1.0 - inner + 0.5 * inner * inner))


def psi(x, kind: str = LOG_QUADRATIC):
    """Evaluate the truncation transform.

    ``saturating`` rises as -log(1 - x + x^2/2) on [0, 1], then holds the
    plateau value log(2) for x >= 1; ``log_quadratic`` keeps growing as
    log(1 + x + x^2/2) for all x >= 0.  Both are extended to negative
    arguments as odd functions.  Accepts scalars or arrays.
    """
    _check_kind(kind)
    x = _as_finite_array(x)
    out = np.sign(x) * _magnitude(np.abs(x), kind)
    return out if out.ndim else float(out)


def psi_envelope(x):
    """Return the (lower, upper) log envelopes at ``x``.

    Both quadratics 1 -+ x + x^2/2 are strictly positive for every real
    x, so the envelopes are finite everywhere.
    """
    x = _as_finite_array(x)
    lower = -np.log1p(-x + 0.5 * x * x)
    upper = np.log1p(x + 0.5 * x * x)
    if lower.ndim:
        return lower, upper
    return float(lower), float(upper)


def psi_derivative(x, kind: str = LOG_QUADRATIC):
    """Derivative of :func:`psi`; even in ``x``.

    The saturating variant is non-smooth at |x| = 1; the inner-branch
    value (which is 0 there as well) is returned, so the derivative is
    0 on the whole plateau |x| >= 1.
    """
    _check_kind(kind)
    x = _as_finite_array(x)
    out = _slope(np.abs(x), kind)
    return out if out.ndim else float(out)


def envelope_holds(x, kind: str, slack: float = 1e-12) -> bool:
    """Check lower - slack <= psi <= upper + slack pointwise on ``x``."""
    values = np.atleast_1d(psi(x, kind))
    lower, upper = psi_envelope(np.atleast_1d(np.asarray(x, dtype=float)))
    return bool(np.all(values >= lower - slack) and np.all(values <= upper + slack))
