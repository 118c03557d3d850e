"""Dataset primitives: losses, empirical risk, the coefficient ball, CSV I/O."""

from __future__ import annotations

import numpy as np

LOSSES = ("l1", "l2")


def check_features_target(X, y):
    """Validate an (X, y) pair and return it as float arrays.

    X must be (n, d) with n >= 1, d >= 1; y must be (n,); all entries
    finite.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-dimensional, got shape {X.shape}")
    if y.ndim != 1:
        raise ValueError(f"y must be 1-dimensional, got shape {y.shape}")
    n, d = X.shape
    if n < 1 or d < 1:
        raise ValueError(f"need at least one sample and one feature, got shape {X.shape}")
    if y.shape[0] != n:
        raise ValueError(f"X has {n} rows but y has {y.shape[0]} entries")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("X and y must be finite")
    return X, y


def check_weights(w, d: int) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape[-1] != d:
        raise ValueError(f"weight vector has length {w.shape[-1]}, expected {d}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    return w


def pointwise_loss(prediction, y, loss: str = "l1"):
    """Absolute ('l1') or squared ('l2') prediction error."""
    if loss not in LOSSES:
        raise ValueError(f"unknown loss {loss!r}; expected one of {LOSSES}")
    err = np.asarray(prediction, dtype=float) - np.asarray(y, dtype=float)
    if not np.all(np.isfinite(err)):
        raise ValueError("loss inputs must be finite")
    out = np.abs(err) if loss == "l1" else err * err
    return out if out.ndim else float(out)


def empirical_risk(X, y, w, loss: str = "l1"):
    """Average training loss of the linear predictor x -> x @ w.

    ``w`` may be a single vector of length d or an (m, d) batch, in
    which case an array of m risks is returned.
    """
    X, y = check_features_target(X, y)
    w = check_weights(w, X.shape[1])
    if w.ndim == 1:
        return float(np.mean(pointwise_loss(X @ w, y, loss)))
    residual = y[np.newaxis, :] - w @ X.T
    if loss == "l1":
        return np.abs(residual).mean(axis=1)
    return (residual * residual).mean(axis=1)


def project_to_ball(w, radius: float) -> np.ndarray:
    """Euclidean projection onto the ball of the given radius; idempotent."""
    if not (radius > 0 and np.isfinite(radius)):
        raise ValueError("radius must be positive and finite")
    w = np.asarray(w, dtype=float)
    norm = np.linalg.norm(w)
    if norm <= radius:
        return w.copy()
    return w * (radius / norm)


def moment_diagnostics(X, y, radius: float):
    """Empirical plug-ins for the moment quantities the risk bounds need.

    Returns (mean_norm, mean_sq_norm, sup_l2_risk) where the last entry
    is the plug-in surrogate 2 * R_hat(w_l2) + 2 * (2 * radius)^2 *
    mean_sq_norm, with w_l2 the ball-constrained least-squares fit.  The
    surrogate mirrors the inequality that bounds the squared-loss risk
    of every coefficient vector in the ball by the risk of the best one
    plus a diameter term.
    """
    from .solvers import solve_erm_l2

    X, y = check_features_target(X, y)
    norms = np.linalg.norm(X, axis=1)
    mean_norm = float(np.mean(norms))
    mean_sq_norm = float(np.mean(norms * norms))
    w_l2 = solve_erm_l2(X, y, radius)
    sup_l2 = 2.0 * empirical_risk(X, y, w_l2, loss="l2") + 2.0 * (2.0 * radius) ** 2 * mean_sq_norm
    return mean_norm, mean_sq_norm, float(sup_l2)


def load_dataset(path, header: bool = False):
    """Read a CSV dataset: d feature columns then the response column."""
    data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    if data.shape[1] < 2:
        raise ValueError(f"{path}: need at least one feature column and one response column")
    return check_features_target(data[:, :-1], data[:, -1])


def save_dataset(path, X, y) -> None:
    X, y = check_features_target(X, y)
    np.savetxt(path, np.column_stack([X, y]), delimiter=",")
