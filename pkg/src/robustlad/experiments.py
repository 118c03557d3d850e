"""Monte Carlo harness: excess-risk scaling, bound coverage, estimator comparison.

Trials are indexed by (n, trial); the data seed for each trial is the
tuple (base_seed, n, trial, stream) fed to numpy's seed sequence, so
seeds are pairwise distinct, independent of execution order, and the
whole run is reproducible for any worker count.  Results are sorted by
(estimator, n, trial) before emission.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .bounds import default_alpha, erm_excess_bound, truncated_excess_bound
from .solvers import SolverConfig, solve_erm_l1, solve_erm_l2, solve_minmax_l2, solve_truncated_l1
from .synth import TaskSpec, excess_l1_risk, generate
from .truncation import LOG_QUADRATIC, TRUNCATION_KINDS

ESTIMATOR_NAMES = ("truncated_l1", "erm_l1", "erm_l2", "minmax_l2")

_DATA_STREAM = 1
_RISK_STREAM = 2

CSV_HEADER = "estimator,n,trial,excess_risk,alpha,bound,seconds"


@dataclass(frozen=True)
class RiskMethod:
    method: str = "monte_carlo"
    samples: int = 10**6

    def __post_init__(self):
        if self.method not in ("analytic", "monte_carlo"):
            raise ValueError(f"unknown risk method {self.method!r}")
        if self.method == "monte_carlo" and self.samples < 2:
            raise ValueError("samples must be >= 2")


@dataclass(frozen=True)
class EstimatorSpec:
    """One estimator entry of an experiment.

    ``alpha`` is either the string 'auto' (the theory-prescribed scale
    computed per n) or an explicit positive number; it applies to the
    truncated and min-max estimators and is ignored by the ERM ones.
    """

    name: str
    truncation: str = LOG_QUADRATIC
    alpha: object = "auto"
    lam: float = 0.0
    label: str | None = None

    def __post_init__(self):
        if self.name not in ESTIMATOR_NAMES:
            raise ValueError(f"unknown estimator {self.name!r}; expected one of {ESTIMATOR_NAMES}")
        if self.truncation not in TRUNCATION_KINDS:
            raise ValueError(f"unknown truncation {self.truncation!r}")
        if self.alpha != "auto" and not (isinstance(self.alpha, (int, float)) and self.alpha > 0):
            raise ValueError("alpha must be 'auto' or a positive number")
        if self.lam < 0 or not math.isfinite(self.lam):
            raise ValueError("lam must be non-negative and finite")

    @property
    def estimator_id(self) -> str:
        if self.label:
            return self.label
        if self.name == "truncated_l1":
            return f"truncated_l1_{self.truncation}"
        return self.name


@dataclass(frozen=True)
class ExperimentSpec:
    task: TaskSpec
    estimators: tuple
    n_grid: tuple
    trials: int
    delta: float = 0.05
    base_seed: int = 0
    risk_method: RiskMethod = RiskMethod()
    solver: SolverConfig = SolverConfig()

    def __post_init__(self):
        estimators = tuple(self.estimators)
        if not estimators or not all(isinstance(e, EstimatorSpec) for e in estimators):
            raise ValueError("estimators must be a non-empty sequence of EstimatorSpec")
        ids = [e.estimator_id for e in estimators]
        if len(set(ids)) != len(ids):
            raise ValueError(f"estimator ids must be unique, got {ids}; disambiguate with 'label'")
        object.__setattr__(self, "estimators", estimators)
        n_grid = tuple(int(n) for n in self.n_grid)
        if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])) or n_grid[0] < 1:
            raise ValueError("n_grid must be a strictly increasing sequence of positive integers")
        object.__setattr__(self, "n_grid", n_grid)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (0.0 < self.delta < 0.5):
            raise ValueError("delta must lie in (0, 1/2)")


@dataclass
class TrialResult:
    estimator: str
    n: int
    trial: int
    weights: np.ndarray
    excess_risk: float
    alpha: float | None
    bound: float | None
    seconds: float
    std_error: float | None = None


def _fit_one(spec: ExperimentSpec, est: EstimatorSpec, X, y, n: int):
    """Fit a single estimator; returns (weights, alpha_used, bound)."""
    task = spec.task
    config = spec.solver
    if est.name == "erm_l1":
        report = solve_erm_l1(X, y, task.B, config)
        bound = None
        if math.isfinite(task.input_bound()):
            bound = erm_excess_bound(task.B, task.input_bound(), n, spec.delta)
        return report.weights, None, bound
    if est.name == "erm_l2":
        return solve_erm_l2(X, y, task.B), None, None
    alpha = default_alpha(n, task.d, task.B, spec.delta) if est.alpha == "auto" else float(est.alpha)
    if est.name == "truncated_l1":
        report = solve_truncated_l1(X, y, task.B, alpha, est.truncation, config)
        bound = truncated_excess_bound(
            n,
            task.d,
            task.B,
            spec.delta,
            mean_norm=task.mean_norm(),
            mean_sq_norm=task.mean_sq_norm(),
            sup_l2_risk=task.sup_l2_risk(),
            alpha=None if est.alpha == "auto" else alpha,
        )
        return report.weights, alpha, bound
    report, _ = solve_minmax_l2(X, y, task.B, est.lam, alpha, config)
    return report.weights, alpha, None


def _run_unit(spec: ExperimentSpec, n: int, trial: int) -> list:
    X, y = generate(spec.task, n, (spec.base_seed, n, trial, _DATA_STREAM))
    out = []
    for est in spec.estimators:
        start = time.perf_counter()
        weights, alpha, bound = _fit_one(spec, est, X, y, n)
        seconds = time.perf_counter() - start
        if spec.risk_method.method == "analytic":
            evaluation = excess_l1_risk(spec.task, weights, method="analytic")
        else:
            evaluation = excess_l1_risk(
                spec.task,
                weights,
                method="monte_carlo",
                samples=spec.risk_method.samples,
                seed=(spec.base_seed, n, trial, _RISK_STREAM),
            )
        out.append(
            TrialResult(
                estimator=est.estimator_id,
                n=n,
                trial=trial,
                weights=np.asarray(weights, dtype=float),
                excess_risk=float(evaluation.value),
                alpha=None if alpha is None else float(alpha),
                bound=None if bound is None else float(bound),
                seconds=float(seconds),
                std_error=None if evaluation.std_error is None else float(evaluation.std_error),
            )
        )
    return out


def _run_unit_star(args) -> list:
    return _run_unit(*args)


def run_trials(spec: ExperimentSpec, jobs: int = 1) -> list:
    """Run all (n, trial) units, optionally on a process pool.

    Output is sorted by (estimator, n, trial) and is identical for any
    ``jobs`` value.
    """
    units = [(spec, n, t) for n in spec.n_grid for t in range(spec.trials)]
    if jobs <= 1:
        batches = [_run_unit_star(u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_run_unit_star, units, chunksize=1))
    results = [r for batch in batches for r in batch]
    results.sort(key=lambda r: (r.estimator, r.n, r.trial))
    return results


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------
def fit_loglog_slope(points):
    """OLS slope of log(value) on log(n) with its standard error.

    Non-positive values are dropped (they have no logarithm); at least
    two usable points are required.  With exactly two points the fit is
    exact and the standard error is reported as nan.
    """
    points = list(points)
    usable = [(n, v) for n, v in points if v > 0]
    dropped = len(points) - len(usable)
    if len(usable) < 2:
        raise ValueError("need at least two positive points for a log-log fit")
    log_n = np.log([n for n, _ in usable])
    log_v = np.log([v for _, v in usable])
    x_centered = log_n - log_n.mean()
    sxx = float(x_centered @ x_centered)
    if sxx == 0.0:
        raise ValueError("log-log fit needs at least two distinct n values")
    slope = float(x_centered @ log_v) / sxx
    intercept = float(log_v.mean()) - slope * float(log_n.mean())
    residuals = log_v - (intercept + slope * log_n)
    k = len(usable)
    if k > 2:
        stderr = math.sqrt(float(residuals @ residuals) / (k - 2) / sxx)
    else:
        stderr = math.nan
    return slope, stderr, dropped


@dataclass
class ScalingResult:
    """Quantile table per (estimator, n) plus fitted log-log slopes."""

    cells: dict
    slopes: dict


def _clamped_for_fit(values, std_errors):
    clamped = 0
    out = []
    for v, s in zip(values, std_errors):
        if v <= 0 and s is not None and s > 0:
            out.append(s)
            clamped += 1
        else:
            out.append(v)
    return out, clamped


def scaling_summary(results, min_slope_points: int = 4) -> ScalingResult:
    """Aggregate trial results into quantiles and per-estimator slopes.

    Medians used in the slope fit clamp non-positive Monte Carlo excess
    values at their standard error; raw quantiles are reported
    untouched, with the clamp count recorded per cell.
    """
    grouped: dict = {}
    for r in results:
        grouped.setdefault((r.estimator, r.n), []).append(r)
    cells = {}
    for key in sorted(grouped):
        rows = grouped[key]
        values = [r.excess_risk for r in rows]
        fit_values, clamped = _clamped_for_fit(values, [r.std_error for r in rows])
        q05, median, q95 = np.percentile(values, [5.0, 50.0, 95.0])
        cells[key] = {
            "q05": float(q05),
            "median": float(median),
            "q95": float(q95),
            "median_for_fit": float(np.median(fit_values)),
            "trials": len(rows),
            "clamped": clamped,
        }
    slopes = {}
    estimators = sorted({e for e, _ in cells})
    for est in estimators:
        points = [(n, cell["median_for_fit"]) for (e, n), cell in cells.items() if e == est]
        if len(points) < min_slope_points:
            continue
        try:
            slope, stderr, dropped = fit_loglog_slope(points)
        except ValueError:
            continue
        slopes[est] = {"slope": slope, "stderr": stderr, "dropped": dropped, "points": len(points)}
    return ScalingResult(cells=cells, slopes=slopes)


def coverage_check(results, bound_source: str, delta: float):
    """Fraction of trials whose excess risk is within the recorded bound.

    ``bound_source`` names which guarantee supplied the bounds:
    'truncated' (holds with probability 1 - 2*delta) or 'erm' (holds
    with probability 1 - delta).  Every result must carry a bound.
    """
    if bound_source not in ("truncated", "erm"):
        raise ValueError(f"unknown bound source {bound_source!r}")
    results = list(results)
    if not results:
        raise ValueError("no results to check coverage on")
    if any(r.bound is None for r in results):
        raise ValueError("every result must carry a bound value")
    coverage = float(np.mean([1.0 if r.excess_risk <= r.bound else 0.0 for r in results]))
    required = 1.0 - 2.0 * delta if bound_source == "truncated" else 1.0 - delta
    return coverage, required


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------
def _csv_field(value) -> str:
    return "" if value is None else repr(float(value))


def results_to_csv(results, destination, timing: bool = False) -> None:
    """Write the trial table; columns estimator,n,trial,excess_risk,alpha,bound,seconds.

    The seconds column is left empty unless ``timing`` is requested:
    wall times differ between runs, and experiment output is specified
    to be byte-identical across reruns of the same spec.
    """
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            ",".join(
                [
                    r.estimator,
                    str(r.n),
                    str(r.trial),
                    _csv_field(r.excess_risk),
                    _csv_field(r.alpha),
                    _csv_field(r.bound),
                    _csv_field(r.seconds) if timing else "",
                ]
            )
        )
    payload = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8") as handle:
            handle.write(payload)


def result_to_record(r: TrialResult) -> dict:
    return {
        "estimator": r.estimator,
        "n": r.n,
        "trial": r.trial,
        "weights": [float(v) for v in np.asarray(r.weights).ravel()],
        "excess_risk": r.excess_risk,
        "alpha": r.alpha,
        "bound": r.bound,
        "seconds": r.seconds,
        "std_error": r.std_error,
    }


def record_to_result(record: dict) -> TrialResult:
    return TrialResult(
        estimator=record["estimator"],
        n=int(record["n"]),
        trial=int(record["trial"]),
        weights=np.asarray(record["weights"], dtype=float),
        excess_risk=float(record["excess_risk"]),
        alpha=None if record["alpha"] is None else float(record["alpha"]),
        bound=None if record["bound"] is None else float(record["bound"]),
        seconds=float(record["seconds"]),
        std_error=None if record.get("std_error") is None else float(record["std_error"]),
    )


def results_to_json(results, destination) -> None:
    payload = json.dumps([result_to_record(r) for r in results], indent=2) + "\n"
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8") as handle:
            handle.write(payload)


def results_from_json(source) -> list:
    if hasattr(source, "read"):
        records = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as handle:
            records = json.load(handle)
    return [record_to_result(rec) for rec in records]


def emit(results, fmt: str, destination, timing: bool = False) -> None:
    """Write trial results as 'csv' or 'json' to a path or file object."""
    if fmt == "csv":
        results_to_csv(results, destination, timing=timing)
    elif fmt == "json":
        results_to_json(results, destination)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


# ---------------------------------------------------------------------------
# JSON experiment specs
# ---------------------------------------------------------------------------
def _require(payload: dict, key: str, where: str):
    if key not in payload:
        raise ValueError(f"{where}: missing required field {key!r}")
    return payload[key]


def experiment_spec_from_dict(payload: dict) -> ExperimentSpec:
    """Build an ExperimentSpec from a JSON document, naming the first violation."""
    if not isinstance(payload, dict):
        raise ValueError("experiment spec must be a JSON object")
    known = {"task", "estimators", "n_grid", "trials", "delta", "base_seed", "risk_method", "solver"}
    extra = set(payload) - known
    if extra:
        raise ValueError(f"experiment spec has unexpected fields {sorted(extra)}")
    task = TaskSpec.from_dict(_require(payload, "task", "experiment spec"))
    raw_estimators = _require(payload, "estimators", "experiment spec")
    if not isinstance(raw_estimators, list) or not raw_estimators:
        raise ValueError("estimators must be a non-empty list")
    estimators = []
    for i, entry in enumerate(raw_estimators):
        if not isinstance(entry, dict) or "name" not in entry:
            raise ValueError(f"estimators[{i}]: must be an object with a 'name' field")
        allowed = {"name", "truncation", "alpha", "lam", "label"}
        unknown = set(entry) - allowed
        if unknown:
            raise ValueError(f"estimators[{i}]: unexpected fields {sorted(unknown)}")
        estimators.append(EstimatorSpec(**entry))
    risk_payload = payload.get("risk_method", {"method": "monte_carlo"})
    if not isinstance(risk_payload, dict) or "method" not in risk_payload:
        raise ValueError("risk_method must be an object with a 'method' field")
    risk_kwargs = {k: v for k, v in risk_payload.items() if k != "method"}
    unknown = set(risk_kwargs) - {"samples"}
    if unknown:
        raise ValueError(f"risk_method has unexpected fields {sorted(unknown)}")
    risk = RiskMethod(method=risk_payload["method"], **{k: int(v) for k, v in risk_kwargs.items()})
    solver_payload = payload.get("solver", {})
    if not isinstance(solver_payload, dict):
        raise ValueError("solver must be an object")
    unknown = set(solver_payload) - {"iterations", "restarts", "step_scale", "seed"}
    if unknown:
        raise ValueError(f"solver has unexpected fields {sorted(unknown)}")
    solver = replace(SolverConfig(), **solver_payload)
    return ExperimentSpec(
        task=task,
        estimators=tuple(estimators),
        n_grid=tuple(_require(payload, "n_grid", "experiment spec")),
        trials=int(_require(payload, "trials", "experiment spec")),
        delta=float(payload.get("delta", 0.05)),
        base_seed=int(payload.get("base_seed", 0)),
        risk_method=risk,
        solver=solver,
    )


def experiment_spec_to_dict(spec: ExperimentSpec) -> dict:
    estimators = []
    for e in spec.estimators:
        entry = {"name": e.name}
        if e.name == "truncated_l1":
            entry["truncation"] = e.truncation
        if e.name in ("truncated_l1", "minmax_l2"):
            entry["alpha"] = e.alpha
        if e.name == "minmax_l2":
            entry["lam"] = e.lam
        if e.label:
            entry["label"] = e.label
        estimators.append(entry)
    out = {
        "task": spec.task.to_dict(),
        "estimators": estimators,
        "n_grid": list(spec.n_grid),
        "trials": spec.trials,
        "delta": spec.delta,
        "base_seed": spec.base_seed,
        "risk_method": {"method": spec.risk_method.method, "samples": spec.risk_method.samples},
        "solver": {
            "iterations": spec.solver.iterations,
            "restarts": spec.solver.restarts,
            "step_scale": spec.solver.step_scale,
            "seed": spec.solver.seed,
        },
    }
    return out
