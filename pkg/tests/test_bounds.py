import math

import numpy as np
import pytest

from robustlad.bounds import default_alpha, erm_excess_bound, log_covering_ball, truncated_excess_bound


def test_log_covering_reference_values():
    assert log_covering_ball(1, 1.0, 6.0) == 0.0
    assert log_covering_ball(2, 1.0, 0.01) == pytest.approx(12.793859310432293, rel=1e-12)
    assert log_covering_ball(10, 2.0, 1.0) == pytest.approx(24.849066497880003, rel=1e-12)
    # clamped at zero for nets coarser than the ball
    assert log_covering_ball(3, 1.0, 100.0) == 0.0
    with pytest.raises(ValueError):
        log_covering_ball(2, -1.0, 0.1)
    with pytest.raises(ValueError):
        log_covering_ball(2, 1.0, 0.0)


def test_default_alpha_worked_example():
    assert default_alpha(100, 2, 1.0, 0.1) == pytest.approx(0.41712143910880894, rel=1e-10)


def test_default_alpha_scaling_in_n_and_delta():
    # quadrupling n halves alpha, up to the covering term growing by d*log(4)
    a1 = default_alpha(100, 2, 1.0, 0.1)
    a4 = default_alpha(400, 2, 1.0, 0.1, epsilon=1.0 / 400)
    ratio = a4 / a1
    log_total = log_covering_ball(2, 1.0, 0.01) + 2 * math.log(10)
    assert ratio > 0.5
    assert ratio == pytest.approx(0.5 * math.sqrt(1 + math.log(4) * 2 / log_total), rel=1e-12)
    assert default_alpha(100, 2, 1.0, 0.01) > default_alpha(100, 2, 1.0, 0.1)
    with pytest.raises(ValueError):
        default_alpha(100, 2, 1.0, 0.7)


def test_alpha_identity():
    for n, d, radius, delta in [(100, 2, 1.0, 0.1), (5000, 7, 3.0, 0.01), (33, 1, 0.5, 0.49)]:
        a = default_alpha(n, d, radius, delta)
        expected = log_covering_ball(d, radius, 1.0 / n) + 2 * math.log(1.0 / delta)
        assert a * a * n == pytest.approx(expected, rel=1e-12)


def test_truncated_bound_worked_example():
    got = truncated_excess_bound(
        100, 2, 1.0, 0.1, mean_norm=1.0, mean_sq_norm=1.0, sup_l2_risk=2.0, epsilon=0.01
    )
    assert got == pytest.approx(1.6885274685791465, rel=1e-10)


def test_truncated_bound_moment_free_case():
    n, d, radius, delta = 400, 3, 1.0, 0.05
    got = truncated_excess_bound(n, d, radius, delta, mean_norm=0.0, mean_sq_norm=0.0, sup_l2_risk=0.0)
    expected = math.sqrt((log_covering_ball(d, radius, 1.0 / n) + 2 * math.log(1 / delta)) / n)
    assert got == pytest.approx(expected, rel=1e-12)


def test_truncated_bound_general_alpha_consistency():
    kwargs = dict(mean_norm=1.3, mean_sq_norm=2.2, sup_l2_risk=7.0)
    for n, d, radius, delta in [(128, 5, 2.0, 0.05), (1000, 2, 1.0, 0.2)]:
        auto = truncated_excess_bound(n, d, radius, delta, **kwargs)
        explicit = truncated_excess_bound(n, d, radius, delta, alpha=default_alpha(n, d, radius, delta), **kwargs)
        assert explicit == pytest.approx(auto, rel=1e-12)


def test_truncated_bound_non_increasing_in_n():
    values = [
        truncated_excess_bound(n, 4, 1.0, 0.05, mean_norm=1.0, mean_sq_norm=2.0, sup_l2_risk=5.0, epsilon=0.001)
        for n in (100, 200, 400, 800)
    ]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_bounds_positive_and_finite():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 10000))
        d = int(rng.integers(1, 20))
        radius = float(rng.uniform(0.1, 10))
        delta = float(rng.uniform(0.01, 0.49))
        b = truncated_excess_bound(
            n, d, radius, delta,
            mean_norm=float(rng.uniform(0, 5)),
            mean_sq_norm=float(rng.uniform(0, 5)),
            sup_l2_risk=float(rng.uniform(0, 50)),
        )
        assert 0 < b < math.inf
        assert 0 < default_alpha(n, d, radius, delta) < math.inf


def test_erm_bound_values():
    assert erm_excess_bound(1.0, 1.0, 10000, 0.05) == pytest.approx(0.08895493661361634, rel=1e-10)
    assert erm_excess_bound(1.0, 1.0, 10000, 1.0) == pytest.approx(4.0 / 100.0, rel=1e-12)
    assert erm_excess_bound(1.0, 2.0, 500, 0.1) == pytest.approx(2 * erm_excess_bound(1.0, 1.0, 500, 0.1), rel=1e-12)
    with pytest.raises(ValueError):
        erm_excess_bound(1.0, 1.0, 100, 0.0)
    with pytest.raises(ValueError):
        erm_excess_bound(1.0, 1.0, 100, 1.5)
