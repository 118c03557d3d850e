"""Command-line interface.

Subcommands: ``check-psi`` (validate the truncation transforms),
``mean`` (robust scalar mean), ``fit`` (fit one estimator to a CSV
dataset), ``bounds`` (closed-form excess-risk bounds), ``experiment``
(run a Monte Carlo spec).  Machine-readable JSON/CSV goes to the
declared destination (stdout by default); human-readable status goes to
stderr.  Exit codes: 0 success, 1 runtime or check failure, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import experiments
from .bounds import default_alpha, erm_excess_bound, truncated_excess_bound
from .catoni import catoni_alpha, catoni_mean
from .data import empirical_risk, load_dataset
from .solvers import SolverConfig, solve_erm_l1, solve_erm_l2, solve_minmax_l2, solve_truncated_l1
from .truncation import LOG_QUADRATIC, SATURATING, envelope_holds, psi

_KIND_TOKENS = {"saturating": SATURATING, "logquad": LOG_QUADRATIC}


class _UsageError(Exception):
    pass


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _status(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# check-psi
# ---------------------------------------------------------------------------
def _cmd_check_psi(args) -> int:
    if args.grid_points < 2:
        raise _UsageError("--grid-points must be >= 2")
    if not args.range > 0:
        raise _UsageError("--range must be positive")
    kinds = [SATURATING, LOG_QUADRATIC] if args.kind == "both" else [_KIND_TOKENS[args.kind]]
    grid = np.linspace(-args.range, args.range, args.grid_points)
    report = []
    all_ok = True
    for kind in kinds:
        values = psi(grid, kind)
        checks = {
            "envelope": envelope_holds(grid, kind, slack=1e-12),
            "monotone": bool(np.all(np.diff(values) >= -1e-15)),
            "odd": bool(np.array_equal(psi(-grid, kind), -values)),
        }
        ok = all(checks.values())
        all_ok = all_ok and ok
        report.append({"kind": kind, "checks": checks, "pass": ok})
        for name, passed in checks.items():
            _status(f"{kind}/{name}: {'pass' if passed else 'FAIL'}")
    _emit_json({"grid_points": args.grid_points, "range": args.range, "results": report}, args.out)
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# mean
# ---------------------------------------------------------------------------
def _read_column(args) -> np.ndarray:
    source = sys.stdin if args.stdin else args.input
    try:
        values = np.loadtxt(source, delimiter=",", ndmin=1)
    except Exception as exc:
        raise RuntimeError(f"could not read input: {exc}") from exc
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise RuntimeError("input is empty")
    if not np.all(np.isfinite(values)):
        raise RuntimeError("input contains non-finite values")
    return values


def _cmd_mean(args) -> int:
    if args.input is None and not args.stdin:
        raise _UsageError("provide --input FILE or --stdin")
    values = _read_column(args)
    kind = _KIND_TOKENS[args.kind]
    variance_plugin = False
    if args.alpha is not None:
        if args.alpha <= 0:
            raise _UsageError("--alpha must be positive")
        alpha = args.alpha
    else:
        variance = float(np.var(values, ddof=1)) if values.size > 1 else 0.0
        variance_plugin = True
        alpha = catoni_alpha(values.size, variance, delta=args.delta) if variance > 0 else None
    estimate = catoni_mean(values, kind=kind, alpha=alpha)
    _emit_json(
        {
            "estimate": estimate,
            "sample_mean": float(np.mean(values)),
            "n": int(values.size),
            "alpha": alpha,
            "kind": kind,
            "variance_plugin": variance_plugin,
        },
        args.out,
    )
    return 0


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------
def _cmd_fit(args) -> int:
    if args.B <= 0:
        raise _UsageError("--B must be positive")
    if not (0 < args.delta < 0.5):
        raise _UsageError("--delta must lie in (0, 1/2)")
    if args.lam < 0:
        raise _UsageError("--lambda must be non-negative")
    alpha_arg = args.alpha
    if alpha_arg != "auto":
        try:
            alpha_arg = float(alpha_arg)
        except ValueError:
            raise _UsageError("--alpha must be 'auto' or a number") from None
        if alpha_arg <= 0:
            raise _UsageError("--alpha must be positive")

    X, y = load_dataset(args.input, header=args.header)
    n, d = X.shape
    config = SolverConfig(
        iterations=args.iters,
        restarts=args.restarts,
        step_scale=args.step_scale,
        seed=args.seed,
    )
    kind = _KIND_TOKENS[args.kind]
    alpha = None
    started = time.perf_counter()
    if args.estimator == "erm-l1":
        report = solve_erm_l1(X, y, args.B, config)
        weights, objective = report.weights, report.objective_value
        extra = {}
    elif args.estimator == "erm-l2":
        weights = solve_erm_l2(X, y, args.B)
        objective = float(empirical_risk(X, y, weights, loss="l2"))
        extra = {}
    elif args.estimator == "trunc-l1":
        alpha = default_alpha(n, d, args.B, args.delta) if alpha_arg == "auto" else alpha_arg
        report = solve_truncated_l1(X, y, args.B, alpha, kind, config)
        weights, objective = report.weights, report.objective_value
        extra = {
            "saturation_fraction": report.saturation_fraction,
            "saturation_warning": report.saturation_warning,
            "starts_tried": report.starts_tried,
        }
    else:  # minmax-l2
        alpha = default_alpha(n, d, args.B, args.delta) if alpha_arg == "auto" else alpha_arg
        report, adversary = solve_minmax_l2(X, y, args.B, args.lam, alpha, config)
        weights, objective = report.weights, report.objective_value
        extra = {"certificate": report.certificate, "adversary": [float(v) for v in adversary]}
    seconds = time.perf_counter() - started

    payload = {
        "estimator": args.estimator,
        "n": n,
        "d": d,
        "B": args.B,
        "weights": [float(v) for v in weights],
        "objective": float(objective),
        "alpha": alpha,
        "seconds": seconds,
    }
    payload.update(extra)
    _emit_json(payload, args.out)
    _status(f"fit {args.estimator} on {n} samples, objective {objective:.6g}")
    return 0


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------
def _cmd_bounds(args) -> int:
    if not (0 < args.delta < 0.5):
        raise _UsageError("--delta must lie in (0, 1/2)")
    if args.n < 1 or args.d < 1:
        raise _UsageError("--n and --d must be positive")
    if args.B <= 0:
        raise _UsageError("--B must be positive")
    if args.epsilon is not None and args.epsilon <= 0:
        raise _UsageError("--epsilon must be positive")
    if min(args.mean_norm, args.mean_sq_norm, args.sup_l2) < 0:
        raise _UsageError("moment plug-ins must be non-negative")
    if args.D is not None and args.D <= 0:
        raise _UsageError("--D must be positive")
    payload = {
        "n": args.n,
        "d": args.d,
        "B": args.B,
        "delta": args.delta,
        "epsilon": args.epsilon if args.epsilon is not None else 1.0 / args.n,
        "alpha": default_alpha(args.n, args.d, args.B, args.delta, args.epsilon),
        "truncated_bound": truncated_excess_bound(
            args.n,
            args.d,
            args.B,
            args.delta,
            mean_norm=args.mean_norm,
            mean_sq_norm=args.mean_sq_norm,
            sup_l2_risk=args.sup_l2,
            epsilon=args.epsilon,
        ),
    }
    if args.D is not None:
        payload["erm_bound"] = erm_excess_bound(args.B, args.D, args.n, args.delta)
    _emit_json(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------
def _cmd_experiment(args) -> int:
    if args.jobs < 1:
        raise _UsageError("--jobs must be >= 1")
    try:
        payload = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise RuntimeError(f"spec file not found: {args.spec}") from None
    except json.JSONDecodeError as exc:
        raise _UsageError(f"spec is not valid JSON: {exc}") from None
    try:
        spec = experiments.experiment_spec_from_dict(payload)
    except (ValueError, TypeError) as exc:
        raise _UsageError(f"invalid experiment spec: {exc}") from None

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _status(f"running {len(spec.n_grid) * spec.trials} trials x {len(spec.estimators)} estimators")
    results = experiments.run_trials(spec, jobs=args.jobs)
    experiments.results_to_csv(results, out_dir / "results.csv")
    experiments.results_to_json(results, out_dir / "results.json")

    scaling = experiments.scaling_summary(results, min_slope_points=2)
    summary: dict = {
        "mode": args.mode,
        "spec": experiments.experiment_spec_to_dict(spec),
        "cells": [
            {"estimator": est, "n": n, **cell} for (est, n), cell in sorted(scaling.cells.items())
        ],
        "slopes": scaling.slopes,
    }
    coverages = {}
    for est in spec.estimators:
        rows = [r for r in results if r.estimator == est.estimator_id and r.bound is not None]
        if not rows:
            continue
        source = "truncated" if est.name == "truncated_l1" else "erm"
        coverage, required = experiments.coverage_check(rows, source, spec.delta)
        coverages[est.estimator_id] = {
            "coverage": coverage,
            "required": required,
            "trials": len(rows),
            "source": source,
        }
    summary["coverages"] = coverages
    if args.mode == "coverage" and not coverages:
        raise RuntimeError("coverage mode requires at least one estimator with a recorded bound")

    with open(out_dir / "summary.json", "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2)
        handle.write("\n")
    _status(f"wrote {out_dir / 'results.csv'} and {out_dir / 'summary.json'}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustlad",
        description="Robust absolute-loss regression for heavy-tailed data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-psi", help="validate the truncation transforms on a grid")
    p.add_argument("--kind", choices=["saturating", "logquad", "both"], default="both")
    p.add_argument("--grid-points", type=int, default=100_001)
    p.add_argument("--range", type=float, default=100.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_check_psi)

    p = sub.add_parser("mean", help="robust mean of a single numeric column")
    p.add_argument("--input", help="CSV file with one numeric column")
    p.add_argument("--stdin", action="store_true", help="read the column from stdin")
    p.add_argument("--kind", choices=["saturating", "logquad"], default="logquad")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--delta", type=float, default=None, help="confidence level for the scale choice")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_mean)

    p = sub.add_parser("fit", help="fit one estimator to a CSV dataset")
    p.add_argument("--input", required=True, help="CSV: d feature columns then the response")
    p.add_argument("--header", action="store_true", help="skip one header row")
    p.add_argument(
        "--estimator",
        required=True,
        choices=["trunc-l1", "erm-l1", "minmax-l2", "erm-l2"],
    )
    p.add_argument("--B", type=float, default=1.0, help="coefficient ball radius")
    p.add_argument("--alpha", default="auto", help="'auto' or a positive number")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--kind", choices=["saturating", "logquad"], default="logquad")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--step-scale", type=float, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("bounds", help="closed-form excess-risk bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--mean-norm", type=float, default=0.0)
    p.add_argument("--mean-sq-norm", type=float, default=0.0)
    p.add_argument("--sup-l2", type=float, default=0.0)
    p.add_argument("--D", type=float, default=None, help="input norm bound for the ERM bound")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment spec")
    p.add_argument("--spec", required=True, help="experiment spec JSON file")
    p.add_argument("--mode", required=True, choices=["scaling", "coverage", "compare"])
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        _status(f"usage error: {exc}")
        return 2
    except (RuntimeError, ValueError, OSError) as exc:
        _status(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
