"""Synthetic heavy-tailed regression tasks with computable absolute-loss risk.

Every noise distribution here is symmetric about zero, so the
conditional median of y given x is x @ w_true; together with
||w_true|| <= B this makes w_true an exact risk minimizer over the
ball, and the excess risk of any fitted coefficient vector is a
well-defined, measurable quantity.  The log-normal noise is symmetrized
(random sign times a log-normal magnitude) for the same reason: the raw
distribution has a nonzero median, which would shift the minimizer.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .data import check_features_target, check_weights

_CHUNK = 1 << 20  # streaming block for Monte Carlo risk evaluation


def _sphere_directions(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    v = rng.standard_normal((n, d))
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return v / norms


def _signs(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, 2, size=n) * 2.0 - 1.0


# ---------------------------------------------------------------------------
# Input distributions
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GaussianInput:
    """Isotropic Gaussian features with per-coordinate deviation sigma."""

    sigma: float = 1.0
    kind: str = field(default="gaussian_iso", init=False)

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be non-negative and finite")

    def sample(self, rng: np.random.Generator, n: int, d: int) -> np.ndarray:
        return self.sigma * rng.standard_normal((n, d))

    def mean_norm(self, d: int) -> float:
        # mean of the chi distribution with d degrees of freedom
        return self.sigma * math.sqrt(2.0) * math.exp(math.lgamma((d + 1) / 2) - math.lgamma(d / 2))

    def mean_sq_norm(self, d: int) -> float:
        return d * self.sigma**2

    def max_norm(self) -> float:
        return math.inf


@dataclass(frozen=True)
class ParetoRadialInput:
    """Uniform direction scaled by a Pareto radius (support >= scale)."""

    tail: float
    scale: float = 1.0
    kind: str = field(default="pareto_radial", init=False)

    def __post_init__(self):
        if not (self.tail > 1 and math.isfinite(self.tail)):
            raise ValueError("tail index must be > 1 and finite")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")

    def sample(self, rng: np.random.Generator, n: int, d: int) -> np.ndarray:
        radii = self.scale * rng.uniform(size=n) ** (-1.0 / self.tail)
        return _sphere_directions(rng, n, d) * radii[:, np.newaxis]

    def mean_norm(self, d: int) -> float:
        return self.scale * self.tail / (self.tail - 1.0)

    def mean_sq_norm(self, d: int) -> float:
        if self.tail <= 2.0:
            return math.inf
        return self.scale**2 * self.tail / (self.tail - 2.0)

    def max_norm(self) -> float:
        return math.inf


@dataclass(frozen=True)
class UniformBallInput:
    """Features uniform on the ball of radius ``bound`` (so ||x|| <= bound a.s.)."""

    bound: float = 1.0
    kind: str = field(default="uniform_ball", init=False)

    def __post_init__(self):
        if not (self.bound > 0 and math.isfinite(self.bound)):
            raise ValueError("bound must be positive and finite")

    def sample(self, rng: np.random.Generator, n: int, d: int) -> np.ndarray:
        radii = self.bound * rng.uniform(size=n) ** (1.0 / d)
        return _sphere_directions(rng, n, d) * radii[:, np.newaxis]

    def mean_norm(self, d: int) -> float:
        return self.bound * d / (d + 1.0)

    def mean_sq_norm(self, d: int) -> float:
        return self.bound**2 * d / (d + 2.0)

    def max_norm(self) -> float:
        return self.bound


# ---------------------------------------------------------------------------
# Noise distributions (all symmetric about zero)
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GaussianNoise:
    sigma: float = 1.0
    kind: str = field(default="gaussian", init=False)

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be non-negative and finite")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.sigma * rng.standard_normal(n)

    def second_moment(self) -> float:
        return self.sigma**2


@dataclass(frozen=True)
class StudentTNoise:
    dof: float
    scale: float = 1.0
    kind: str = field(default="student_t", init=False)

    def __post_init__(self):
        if not (self.dof > 0 and math.isfinite(self.dof)):
            raise ValueError("dof must be positive and finite")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.scale * rng.standard_t(self.dof, size=n)

    def second_moment(self) -> float:
        if self.dof <= 2.0:
            return math.inf
        return self.scale**2 * self.dof / (self.dof - 2.0)


@dataclass(frozen=True)
class SymmetricParetoNoise:
    """Random sign times a Pareto magnitude (support |noise| >= scale)."""

    tail: float
    scale: float = 1.0
    kind: str = field(default="symmetric_pareto", init=False)

    def __post_init__(self):
        if not (self.tail > 1 and math.isfinite(self.tail)):
            raise ValueError("tail index must be > 1 and finite")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        magnitudes = self.scale * rng.uniform(size=n) ** (-1.0 / self.tail)
        return _signs(rng, n) * magnitudes

    def second_moment(self) -> float:
        if self.tail <= 2.0:
            return math.inf
        return self.scale**2 * self.tail / (self.tail - 2.0)


@dataclass(frozen=True)
class CenteredLogNormalNoise:
    """Random sign times a log-normal magnitude; median 0 by construction."""

    mu: float = 0.0
    sigma_log: float = 1.0
    kind: str = field(default="centered_log_normal", init=False)

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")
        if not (self.sigma_log >= 0 and math.isfinite(self.sigma_log)):
            raise ValueError("sigma_log must be non-negative and finite")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return _signs(rng, n) * rng.lognormal(self.mu, self.sigma_log, size=n)

    def second_moment(self) -> float:
        return math.exp(2.0 * self.mu + 2.0 * self.sigma_log**2)


INPUT_DISTRIBUTIONS = {
    "gaussian_iso": GaussianInput,
    "pareto_radial": ParetoRadialInput,
    "uniform_ball": UniformBallInput,
}
NOISE_DISTRIBUTIONS = {
    "gaussian": GaussianNoise,
    "student_t": StudentTNoise,
    "symmetric_pareto": SymmetricParetoNoise,
    "centered_log_normal": CenteredLogNormalNoise,
}


def _dist_to_dict(dist) -> dict:
    return asdict(dist)


def _dist_from_dict(payload: dict, registry: dict, what: str):
    if not isinstance(payload, dict) or "kind" not in payload:
        raise ValueError(f"{what} must be an object with a 'kind' field")
    kind = payload["kind"]
    if kind not in registry:
        raise ValueError(f"unknown {what} kind {kind!r}; expected one of {sorted(registry)}")
    cls = registry[kind]
    names = {f.name for f in fields(cls) if f.init}
    extra = set(payload) - names - {"kind"}
    if extra:
        raise ValueError(f"unexpected {what} fields {sorted(extra)} for kind {kind!r}")
    return cls(**{k: v for k, v in payload.items() if k != "kind"})


# ---------------------------------------------------------------------------
# Tasks
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class TaskSpec:
    """A synthetic regression task with known true coefficients.

    ``B`` is the coefficient-ball radius handed to the solvers; the
    invariant ||w_true|| <= B keeps the true coefficients feasible, so
    they minimize the absolute-loss risk exactly.
    """

    d: int
    w_true: tuple
    B: float
    input_dist: object
    noise_dist: object

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        w = tuple(float(v) for v in self.w_true)
        if len(w) != self.d:
            raise ValueError(f"w_true has length {len(w)}, expected d = {self.d}")
        if not all(math.isfinite(v) for v in w):
            raise ValueError("w_true must be finite")
        object.__setattr__(self, "w_true", w)
        if not (self.B > 0 and math.isfinite(self.B)):
            raise ValueError("B must be positive and finite")
        if math.sqrt(sum(v * v for v in w)) > self.B * (1 + 1e-12):
            raise ValueError("||w_true|| must not exceed B")
        if type(self.input_dist) not in INPUT_DISTRIBUTIONS.values():
            raise ValueError("input_dist must be one of the provided input distributions")
        if type(self.noise_dist) not in NOISE_DISTRIBUTIONS.values():
            raise ValueError("noise_dist must be one of the provided noise distributions")

    def true_weights(self) -> np.ndarray:
        return np.asarray(self.w_true, dtype=float)

    def sample(self, rng: np.random.Generator, n: int):
        X = self.input_dist.sample(rng, n, self.d)
        y = X @ self.true_weights() + self.noise_dist.sample(rng, n)
        return X, y

    # -- analytic moments used by the bound calculators -------------------
    def mean_norm(self) -> float:
        return self.input_dist.mean_norm(self.d)

    def mean_sq_norm(self) -> float:
        return self.input_dist.mean_sq_norm(self.d)

    def noise_second_moment(self) -> float:
        return self.noise_dist.second_moment()

    def sup_l2_risk(self) -> float:
        """Surrogate bound on the squared-loss risk over the ball.

        2 * E[noise^2] + 2 * (2B)^2 * E[||x||^2]; the first term is the
        squared-loss risk at w_true, the second covers the diameter of
        the ball.  Infinite when the task sits outside the
        second-moment assumptions.
        """
        return 2.0 * self.noise_second_moment() + 2.0 * (2.0 * self.B) ** 2 * self.mean_sq_norm()

    def input_bound(self) -> float:
        """Almost-sure bound on ||x||; infinite for unbounded inputs."""
        return self.input_dist.max_norm()

    @property
    def finite_second_moment(self) -> bool:
        """Whether the task satisfies the second-moment assumptions."""
        return math.isfinite(self.mean_sq_norm()) and math.isfinite(self.noise_second_moment())

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "w_true": list(self.w_true),
            "B": self.B,
            "input_dist": _dist_to_dict(self.input_dist),
            "noise_dist": _dist_to_dict(self.noise_dist),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TaskSpec":
        required = {"d", "w_true", "B", "input_dist", "noise_dist"}
        missing = required - set(payload)
        if missing:
            raise ValueError(f"task is missing fields {sorted(missing)}")
        extra = set(payload) - required
        if extra:
            raise ValueError(f"task has unexpected fields {sorted(extra)}")
        return cls(
            d=int(payload["d"]),
            w_true=tuple(payload["w_true"]),
            B=float(payload["B"]),
            input_dist=_dist_from_dict(payload["input_dist"], INPUT_DISTRIBUTIONS, "input_dist"),
            noise_dist=_dist_from_dict(payload["noise_dist"], NOISE_DISTRIBUTIONS, "noise_dist"),
        )


def generate(task: TaskSpec, n: int, seed):
    """Draw n i.i.d. samples from the task; deterministic given (task, n, seed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return task.sample(rng, n)


# ---------------------------------------------------------------------------
# Risk evaluation
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class RiskEvaluation:
    value: float
    method: str  # "analytic" or "monte_carlo"
    std_error: float | None = None
    samples: int | None = None
    seed: object = None


def _analytic_supported(task: TaskSpec) -> bool:
    return isinstance(task.input_dist, GaussianInput) and isinstance(task.noise_dist, GaussianNoise)


def _analytic_l1_risk(task: TaskSpec, w: np.ndarray) -> float:
    # residual is zero-mean Gaussian; mean absolute value of N(0, s^2) is s * sqrt(2/pi)
    delta = task.true_weights() - w
    spread = math.sqrt(task.input_dist.sigma**2 * float(delta @ delta) + task.noise_dist.sigma**2)
    return math.sqrt(2.0 / math.pi) * spread


def _mc_accumulate(task: TaskSpec, w, w_ref, samples: int, seed):
    """Stream Monte Carlo sums of |y - Xw| (and |y - Xw_ref| differences)."""
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        block = min(_CHUNK, samples - done)
        X, y = task.sample(rng, block)
        vals = np.abs(y - X @ w)
        if w_ref is not None:
            vals = vals - np.abs(y - X @ w_ref)
        total += float(vals.sum())
        total_sq += float(vals @ vals)
        done += block
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
    return mean, math.sqrt(var / samples)


def true_l1_risk(task: TaskSpec, w, method: str = "analytic", samples: int = 10**6, seed=0) -> RiskEvaluation:
    """Population absolute-loss risk of the linear predictor given by ``w``.

    ``method='analytic'`` is exact but only available for Gaussian
    inputs with Gaussian noise; ``method='monte_carlo'`` averages over
    ``samples`` freshly generated pairs and reports a standard error.
    """
    w = check_weights(np.asarray(w, dtype=float), task.d)
    if method == "analytic":
        if not _analytic_supported(task):
            raise ValueError("analytic risk requires Gaussian inputs and Gaussian noise; use method='monte_carlo'")
        return RiskEvaluation(value=_analytic_l1_risk(task, w), method="analytic")
    if method != "monte_carlo":
        raise ValueError(f"unknown risk method {method!r}")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    mean, std_error = _mc_accumulate(task, w, None, samples, seed)
    return RiskEvaluation(value=mean, method="monte_carlo", std_error=std_error, samples=samples, seed=seed)


def excess_l1_risk(task: TaskSpec, w, method: str = "analytic", samples: int = 10**6, seed=0) -> RiskEvaluation:
    """Risk at ``w`` minus risk at the true coefficients.

    The Monte Carlo path evaluates both risks on the same fresh sample
    (common random numbers), so the reported standard error is that of
    the paired difference, typically far smaller than either risk's.
    """
    w = check_weights(np.asarray(w, dtype=float), task.d)
    if method == "analytic":
        if not _analytic_supported(task):
            raise ValueError("analytic risk requires Gaussian inputs and Gaussian noise; use method='monte_carlo'")
        return RiskEvaluation(
            value=_analytic_l1_risk(task, w) - _analytic_l1_risk(task, task.true_weights()),
            method="analytic",
        )
    if method != "monte_carlo":
        raise ValueError(f"unknown risk method {method!r}")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    mean, std_error = _mc_accumulate(task, w, task.true_weights(), samples, seed)
    return RiskEvaluation(value=mean, method="monte_carlo", std_error=std_error, samples=samples, seed=seed)


def dataset_from_task(task: TaskSpec, n: int, seed):
    """Generate and validate a training set (X, y) from the task."""
    return check_features_target(*generate(task, n, seed))
