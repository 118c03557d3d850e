"""Constrained solvers for the regression objectives.

Three iterative schemes over the coefficient ball, plus an exact
least-squares helper and a brute-force grid oracle for low dimensions:

* projected subgradient descent for absolute-loss ERM (convex),
* multi-start normalized gradient descent for the truncated objective
  (non-convex; per-sample terms quasiconvex), warm-started at the ERM
  solution,
* simultaneous projected gradient descent-ascent for the min-max
  squared-loss baseline, reported with a pool certificate.

Every scheme tracks the best iterate seen, so the reported objective
never exceeds the objective at any start point.  All randomness flows
through seeds derived from (config.seed, start index), making reports
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .data import check_features_target, empirical_risk, project_to_ball
from .objectives import _minmax_gradients_core, _minmax_payoff_core
from .truncation import LOG_QUADRATIC, _check_kind, _magnitude, _slope


@dataclass(frozen=True)
class SolverConfig:
    """Iteration budget and multi-start policy shared by the iterative solvers."""

    iterations: int = 2000
    restarts: int = 16
    step_scale: float | None = None  # None: use the ball radius
    seed: int = 0
    record_trajectory: bool = False

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.step_scale is not None and not self.step_scale > 0:
            raise ValueError("step_scale must be positive")


@dataclass
class SolveReport:
    weights: np.ndarray
    objective_value: float
    starts_tried: int
    best_start_index: int
    saturation_fraction: float | None = None
    saturation_warning: bool = False
    certificate: float | None = None
    trajectory: list = field(default_factory=list)


def _step_scale(config: SolverConfig, radius: float) -> float:
    return radius if config.step_scale is None else config.step_scale


def _ball_point(rng: np.random.Generator, d: int, radius: float) -> np.ndarray:
    v = rng.standard_normal(d)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return np.zeros(d)
    return v * (radius * rng.uniform() ** (1.0 / d) / norm)


def solve_erm_l1(X, y, radius: float, config: SolverConfig | None = None) -> SolveReport:
    """Projected subgradient descent on the empirical absolute-loss risk.

    Steps eta_t = step_scale / (G * sqrt(t)) with G the largest row norm
    of X (a bound on the subgradient norm), starting from the origin;
    returns the iterate with the lowest risk encountered.
    """
    config = config or SolverConfig()
    X, y = check_features_target(X, y)
    n, d = X.shape
    gain = max(float(np.linalg.norm(X, axis=1).max()), np.finfo(float).tiny)
    scale = _step_scale(config, radius) / gain

    w = np.zeros(d)
    best_w = w
    best_val = np.inf
    trace = []
    for t in range(1, config.iterations + 1):
        r = y - X @ w
        val = float(np.mean(np.abs(r)))
        if val < best_val:
            best_val, best_w = val, w
        if config.record_trajectory:
            trace.append(val)
        g = -(X.T @ np.sign(r)) / n
        w = project_to_ball(w - (scale / np.sqrt(t)) * g, radius)
    val = float(empirical_risk(X, y, w, loss="l1"))
    if val < best_val:
        best_val, best_w = val, w
    if config.record_trajectory:
        trace.append(val)
    return SolveReport(
        weights=best_w.copy(),
        objective_value=best_val,
        starts_tried=1,
        best_start_index=0,
        trajectory=[np.asarray(trace)] if config.record_trajectory else [],
    )


def solve_erm_l2(X, y, radius: float) -> np.ndarray:
    """Exact ball-constrained least squares.

    The unconstrained (minimum-norm) solution is returned when it fits
    inside the ball; otherwise the boundary solution is located by
    root-finding the ridge path ||w(mu)|| = radius on the SVD of X.
    """
    X, y = check_features_target(X, y)
    if not (radius > 0 and np.isfinite(radius)):
        raise ValueError("radius must be positive and finite")
    w_ls = np.linalg.lstsq(X, y, rcond=None)[0]
    if np.linalg.norm(w_ls) <= radius:
        return w_ls
    _, s, vt = np.linalg.svd(X, full_matrices=False)
    keep = s > s[0] * 1e-14
    s = s[keep]
    vt = vt[keep]
    u_ty = (vt @ w_ls) * s  # equals U^T y on the kept spectrum
    coeff = s * u_ty

    def radius_gap(mu: float) -> float:
        return float(np.linalg.norm(coeff / (s * s + mu))) - radius

    hi = float(np.linalg.norm(coeff)) / radius
    mu_star = brentq(radius_gap, 0.0, hi, xtol=1e-300, rtol=8.9e-16)
    return vt.T @ (coeff / (s * s + mu_star))


def _truncated_stats(X, y, w, alpha: float, kind: str):
    r = y - X @ w
    scaled = alpha * np.abs(r)
    value = float(np.mean(_magnitude(scaled, kind)) / alpha)
    grad = -(X.T @ (_slope(scaled, kind) * np.sign(r))) / X.shape[0]
    return value, grad


def solve_truncated_l1(
    X,
    y,
    radius: float,
    alpha: float,
    kind: str = LOG_QUADRATIC,
    config: SolverConfig | None = None,
) -> SolveReport:
    """Multi-start normalized gradient descent on the truncated objective.

    Start points: the origin, the ERM absolute-loss solution (computed
    with the same config), and restarts - 2 points drawn uniformly from
    the ball with per-start derived seeds.  Each run takes normalized
    steps eta_t = step_scale / sqrt(t); zero-gradient iterates (the
    saturating plateau) end the run since no further movement is
    possible.  The best iterate across all runs, by truncated objective
    value, is returned.  ``saturation_warning`` is set when more than
    half the samples sit on the truncation plateau at the solution,
    which signals an overly large alpha.
    """
    config = config or SolverConfig()
    X, y = check_features_target(X, y)
    if not (alpha > 0 and np.isfinite(alpha)):
        raise ValueError("alpha must be positive and finite")
    _check_kind(kind)
    n, d = X.shape
    scale = _step_scale(config, radius)

    starts = [np.zeros(d)]
    if config.restarts >= 2:
        starts.append(project_to_ball(solve_erm_l1(X, y, radius, config).weights, radius))
    for k in range(config.restarts - 2):
        rng = np.random.default_rng((config.seed, k))
        starts.append(_ball_point(rng, d, radius))

    best_val = np.inf
    best_w = starts[0]
    best_start = 0
    traces = []
    for idx, start in enumerate(starts):
        w = start
        run_trace = []
        for t in range(1, config.iterations + 1):
            val, g = _truncated_stats(X, y, w, alpha, kind)
            if val < best_val:
                best_val, best_w, best_start = val, w, idx
            if config.record_trajectory:
                run_trace.append(val)
            g_norm = float(np.linalg.norm(g))
            if g_norm == 0.0:
                break
            w = project_to_ball(w - (scale / np.sqrt(t)) * (g / g_norm), radius)
        val, _ = _truncated_stats(X, y, w, alpha, kind)
        if val < best_val:
            best_val, best_w, best_start = val, w, idx
        if config.record_trajectory:
            run_trace.append(val)
            traces.append(np.asarray(run_trace))

    saturation = float(np.mean(alpha * np.abs(y - X @ best_w) >= 1.0))
    return SolveReport(
        weights=best_w.copy(),
        objective_value=best_val,
        starts_tried=len(starts),
        best_start_index=best_start,
        saturation_fraction=saturation,
        saturation_warning=saturation > 0.5,
        trajectory=traces,
    )


def solve_minmax_l2(
    X,
    y,
    radius: float,
    lam: float,
    alpha: float,
    config: SolverConfig | None = None,
):
    """Simultaneous projected gradient descent-ascent on the min-max payoff.

    The minimizing player starts at the origin, the adversary at the
    ball-constrained least-squares fit; both take equal decaying steps
    eta_t = step_scale / sqrt(t) and the last iterates are returned.
    The starts must differ: the diagonal w = u is invariant under
    simultaneous equal-step updates (the truncation argument stays 0),
    which would silently reduce the scheme to plain least squares.  The
    report's objective is a certificate: the largest payoff of the
    final w against a pool of adversaries (origin, final u, the least-
    squares fit, and seeded random ball points), so values near zero or
    below indicate approximate min-max optimality.
    """
    config = config or SolverConfig()
    X, y = check_features_target(X, y)
    n, d = X.shape
    scale = _step_scale(config, radius)

    if not (alpha > 0 and np.isfinite(alpha)):
        raise ValueError("alpha must be positive and finite")
    if lam < 0 or not np.isfinite(lam):
        raise ValueError("lam must be non-negative and finite")
    ls_fit = solve_erm_l2(X, y, radius)
    w = np.zeros(d)
    u = ls_fit.copy()
    trace = []
    for t in range(1, config.iterations + 1):
        gw, gu = _minmax_gradients_core(X, y, w, u, lam, alpha)
        eta = scale / np.sqrt(t)
        w_next = project_to_ball(w - eta * gw, radius)
        u_next = project_to_ball(u + eta * gu, radius)
        w, u = w_next, u_next
        if config.record_trajectory:
            trace.append(_minmax_payoff_core(X, y, w, u, lam, alpha))

    pool = [np.zeros(d), u, ls_fit]
    for k in range(max(config.restarts - len(pool), 0)):
        rng = np.random.default_rng((config.seed, 1_000_000 + k))
        pool.append(_ball_point(rng, d, radius))
    certificate = max(_minmax_payoff_core(X, y, w, v, lam, alpha) for v in pool)

    rw = y - X @ w
    ru = y - X @ u
    saturation = float(np.mean(alpha * np.abs(rw * rw - ru * ru) >= 1.0))
    report = SolveReport(
        weights=w.copy(),
        objective_value=certificate,
        starts_tried=1,
        best_start_index=0,
        saturation_fraction=saturation,
        saturation_warning=saturation > 0.5,
        certificate=certificate,
        trajectory=[np.asarray(trace)] if config.record_trajectory else [],
    )
    return report, u.copy()


def grid_search(objective, radius: float, dim: int, resolution: int, chunk: int = 1 << 18) -> np.ndarray:
    """Exhaustive minimization over a regular grid intersected with the ball.

    ``objective`` must accept an (m, dim) array of candidate points and
    return m values.  Supported for dim in {1, 2} only.  Ties are broken
    toward the lexicographically smallest grid point; the grid is
    enumerated in lexicographic order so the first minimum wins.
    """
    if dim not in (1, 2):
        raise ValueError(f"grid_search supports dim 1 or 2, got {dim}")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if not (radius > 0 and np.isfinite(radius)):
        raise ValueError("radius must be positive and finite")
    axis = np.linspace(-radius, radius, resolution)

    best_val = np.inf
    best_point: np.ndarray | None = None
    total = resolution**dim
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total))
        if dim == 1:
            points = axis[idx, np.newaxis]
        else:
            points = np.column_stack([axis[idx // resolution], axis[idx % resolution]])
            points = points[np.linalg.norm(points, axis=1) <= radius]
            if points.shape[0] == 0:
                continue
        values = np.asarray(objective(points), dtype=float)
        pos = int(np.argmin(values))
        if values[pos] < best_val:
            best_val = float(values[pos])
            best_point = points[pos].copy()
    if best_point is None:
        raise ValueError("no grid point falls inside the ball; increase resolution")
    return best_point
