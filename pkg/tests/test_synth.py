import json
import math

import numpy as np
import pytest

from robustlad.synth import (
    CenteredLogNormalNoise,
    GaussianInput,
    GaussianNoise,
    ParetoRadialInput,
    StudentTNoise,
    SymmetricParetoNoise,
    TaskSpec,
    UniformBallInput,
    excess_l1_risk,
    generate,
    true_l1_risk,
)

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def gaussian_task(d=3, sigma_x=1.0, sigma=1.0, radius=2.0, w=None):
    if w is None:
        w = np.zeros(d)
        w[0] = 1.0
    return TaskSpec(d=d, w_true=tuple(w), B=radius, input_dist=GaussianInput(sigma_x), noise_dist=GaussianNoise(sigma))


def test_zero_noise_is_exactly_realizable():
    task = gaussian_task(sigma=0.0)
    X, y = generate(task, 50, seed=0)
    np.testing.assert_array_equal(y, X @ task.true_weights())


def test_uniform_ball_support_bound():
    task = TaskSpec(d=4, w_true=(0.1, 0.0, 0.0, 0.0), B=1.0,
                    input_dist=UniformBallInput(0.75), noise_dist=GaussianNoise(0.1))
    X, _ = generate(task, 2000, seed=1)
    assert np.max(np.linalg.norm(X, axis=1)) <= 0.75 + 1e-12


def test_generation_is_deterministic():
    task = gaussian_task()
    X1, y1 = generate(task, 64, seed=(7, 3))
    X2, y2 = generate(task, 64, seed=(7, 3))
    np.testing.assert_array_equal(X1, X2)
    np.testing.assert_array_equal(y1, y2)
    X3, _ = generate(task, 64, seed=(7, 4))
    assert not np.array_equal(X1, X3)


def test_task_validation():
    with pytest.raises(ValueError):
        gaussian_task(d=2, w=np.array([3.0, 0.0]), radius=1.0)  # ||w_true|| > B
    with pytest.raises(ValueError):
        TaskSpec(d=2, w_true=(0.1,), B=1.0, input_dist=GaussianInput(), noise_dist=GaussianNoise())
    with pytest.raises(ValueError):
        ParetoRadialInput(tail=0.5)
    with pytest.raises(ValueError):
        SymmetricParetoNoise(tail=1.0)
    with pytest.raises(ValueError):
        StudentTNoise(dof=-1.0)


def test_analytic_risk_reference_values():
    task = gaussian_task(d=3, sigma_x=1.0, sigma=1.0)
    at_truth = true_l1_risk(task, task.true_weights(), method="analytic")
    assert at_truth.value == pytest.approx(SQRT_2_OVER_PI, rel=1e-12)
    assert at_truth.std_error is None
    w = task.true_weights() + np.array([1.0, 0.0, 0.0])  # ||delta|| = 1
    shifted = true_l1_risk(task, w, method="analytic")
    assert shifted.value == pytest.approx(SQRT_2_OVER_PI * math.sqrt(2.0), rel=1e-12)
    excess = excess_l1_risk(task, w, method="analytic")
    assert excess.value == pytest.approx(SQRT_2_OVER_PI * (math.sqrt(2.0) - 1.0), rel=1e-12)
    assert excess_l1_risk(task, task.true_weights(), method="analytic").value == 0.0


def test_analytic_risk_unsupported_combination():
    task = TaskSpec(d=2, w_true=(0.5, 0.0), B=1.0,
                    input_dist=GaussianInput(), noise_dist=StudentTNoise(2.5))
    with pytest.raises(ValueError):
        true_l1_risk(task, (0.0, 0.0), method="analytic")
    with pytest.raises(ValueError):
        true_l1_risk(task, (0.0, 0.0), method="bootstrap")


def test_monte_carlo_matches_analytic():
    task = gaussian_task(d=2)
    rng = np.random.default_rng(2)
    for k in range(3):
        w = task.true_weights() + rng.standard_normal(2) * 0.5
        mc = true_l1_risk(task, w, method="monte_carlo", samples=200_000, seed=(50, k))
        exact = true_l1_risk(task, w, method="analytic")
        assert mc.std_error is not None
        assert abs(mc.value - exact.value) <= 4.5 * mc.std_error


def test_monte_carlo_excess_uses_common_random_numbers():
    task = gaussian_task(d=2)
    w = task.true_weights() + np.array([0.05, -0.02])
    paired = excess_l1_risk(task, w, method="monte_carlo", samples=100_000, seed=4)
    exact = excess_l1_risk(task, w, method="analytic")
    # paired error bars are far tighter than the individual risks'
    single = true_l1_risk(task, w, method="monte_carlo", samples=100_000, seed=4)
    assert paired.std_error < single.std_error / 3
    assert abs(paired.value - exact.value) <= 5 * paired.std_error
    assert paired.value >= -4 * paired.std_error


def test_median_optimality_of_true_weights():
    tasks = [
        gaussian_task(d=2),
        TaskSpec(d=2, w_true=(0.4, -0.3), B=1.0, input_dist=ParetoRadialInput(2.5),
                 noise_dist=SymmetricParetoNoise(2.1)),
        TaskSpec(d=3, w_true=(0.1, 0.2, -0.1), B=0.5, input_dist=UniformBallInput(1.0),
                 noise_dist=CenteredLogNormalNoise(0.0, 1.0)),
        TaskSpec(d=2, w_true=(0.0, 0.25), B=0.5, input_dist=GaussianInput(2.0),
                 noise_dist=StudentTNoise(2.5, 0.7)),
    ]
    rng = np.random.default_rng(5)
    for i, task in enumerate(tasks):
        for k in range(8):
            v = rng.standard_normal(task.d)
            w = v / np.linalg.norm(v) * rng.uniform(0, task.B)
            ev = excess_l1_risk(task, w, method="monte_carlo", samples=60_000, seed=(i, k))
            assert ev.value >= -4.0 * ev.std_error


def test_noise_symmetry():
    # odd moments of the noise vanish within Monte Carlo error
    dists = [StudentTNoise(2.5), SymmetricParetoNoise(3.0), CenteredLogNormalNoise(0.0, 0.8)]
    rng_seeds = [10, 11, 12]
    for dist, seed in zip(dists, rng_seeds):
        rng = np.random.default_rng(seed)
        draws = dist.sample(rng, 400_000)
        clipped = np.clip(draws, -50, 50)  # symmetric statistic robust to tails
        se = clipped.std(ddof=1) / math.sqrt(clipped.size)
        assert abs(clipped.mean()) <= 4 * se


def test_analytic_moments():
    task = gaussian_task(d=5, sigma_x=1.0, sigma=1.0)
    assert task.mean_sq_norm() == pytest.approx(5.0, rel=1e-12)
    assert task.mean_norm() == pytest.approx(2.127692162140974, rel=1e-12)  # chi(5) mean
    assert task.noise_second_moment() == 1.0
    assert task.sup_l2_risk() == pytest.approx(2.0 + 2.0 * 16.0 * 5.0, rel=1e-12)
    ub = TaskSpec(d=2, w_true=(0.0, 0.0), B=1.0, input_dist=UniformBallInput(1.0),
                  noise_dist=SymmetricParetoNoise(2.1))
    assert ub.mean_norm() == pytest.approx(2.0 / 3.0, rel=1e-12)
    assert ub.mean_sq_norm() == pytest.approx(0.5, rel=1e-12)
    assert ub.noise_second_moment() == pytest.approx(21.0, rel=1e-12)
    assert ub.input_bound() == 1.0
    assert math.isinf(task.input_bound())


def test_empirical_moments_match_analytic():
    task = TaskSpec(d=3, w_true=(0.0, 0.0, 0.0), B=1.0,
                    input_dist=ParetoRadialInput(2.5, 1.0), noise_dist=GaussianNoise(0.5))
    X, _ = generate(task, 400_000, seed=99)
    norms = np.linalg.norm(X, axis=1)
    assert abs(norms.mean() - task.mean_norm()) <= 4 * norms.std(ddof=1) / math.sqrt(norms.size)
    # E r = tail/(tail-1) = 5/3, E r^2 = tail/(tail-2) = 5
    assert task.mean_norm() == pytest.approx(5.0 / 3.0, rel=1e-12)
    assert task.mean_sq_norm() == pytest.approx(5.0, rel=1e-12)


def test_second_moment_scope_flag():
    in_scope = TaskSpec(d=2, w_true=(0.0, 0.0), B=1.0,
                        input_dist=ParetoRadialInput(2.1), noise_dist=GaussianNoise())
    out_input = TaskSpec(d=2, w_true=(0.0, 0.0), B=1.0,
                         input_dist=ParetoRadialInput(1.9), noise_dist=GaussianNoise())
    out_noise = TaskSpec(d=2, w_true=(0.0, 0.0), B=1.0,
                         input_dist=GaussianInput(), noise_dist=StudentTNoise(1.8))
    assert in_scope.finite_second_moment
    assert not out_input.finite_second_moment
    assert not out_noise.finite_second_moment
    assert math.isinf(out_input.mean_sq_norm())
    assert math.isinf(out_noise.sup_l2_risk())


def test_task_json_round_trip():
    tasks = [
        gaussian_task(),
        TaskSpec(d=2, w_true=(0.4, -0.3), B=1.0, input_dist=ParetoRadialInput(2.5, 1.5),
                 noise_dist=SymmetricParetoNoise(2.1, 0.5)),
        TaskSpec(d=1, w_true=(0.2,), B=0.5, input_dist=UniformBallInput(2.0),
                 noise_dist=CenteredLogNormalNoise(0.1, 0.9)),
    ]
    for task in tasks:
        payload = json.loads(json.dumps(task.to_dict()))
        back = TaskSpec.from_dict(payload)
        assert back == task
    with pytest.raises(ValueError):
        TaskSpec.from_dict({"d": 1})
    with pytest.raises(ValueError):
        TaskSpec.from_dict({**tasks[0].to_dict(), "input_dist": {"kind": "cauchy"}})
