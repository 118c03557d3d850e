import numpy as np
import pytest

from robustlad.catoni import catoni_alpha, catoni_mean
from robustlad.truncation import LOG_QUADRATIC, SATURATING, psi


def test_alpha_rule():
    assert catoni_alpha(2, 1.0) == 1.0
    assert catoni_alpha(200, 1.0) == pytest.approx(0.1, rel=1e-15)
    assert catoni_alpha(8, 4.0) == pytest.approx(0.25, rel=1e-15)
    # confidence scaling: delta = 1/e recovers the default
    assert catoni_alpha(50, 2.0, delta=np.exp(-1.0)) == pytest.approx(catoni_alpha(50, 2.0), rel=1e-12)
    with pytest.raises(ValueError):
        catoni_alpha(10, 0.0)
    with pytest.raises(ValueError):
        catoni_alpha(10, -1.0)


@pytest.mark.parametrize("kind", [SATURATING, LOG_QUADRATIC])
def test_constant_sample_is_exact_root(kind):
    assert catoni_mean([3.25] * 5, kind=kind) == 3.25


@pytest.mark.parametrize("kind", [SATURATING, LOG_QUADRATIC])
def test_symmetric_pair_estimates_zero(kind):
    assert catoni_mean([-7.0, 7.0], kind=kind, alpha=0.31) == pytest.approx(0.0, abs=1e-9)


def test_small_alpha_limit_is_sample_mean():
    values = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    est = catoni_mean(values, kind=SATURATING, alpha=1e-8)
    assert est == pytest.approx(2.0, abs=1e-6)


def test_small_alpha_limit_on_random_samples():
    rng = np.random.default_rng(11)
    for _ in range(20):
        values = rng.standard_normal(rng.integers(2, 400)) * rng.uniform(0.1, 50)
        spread = values.max() - values.min()
        est = catoni_mean(values, alpha=1e-9 / spread)
        assert abs(est - values.mean()) <= 1e-6 * spread


def test_translation_equivariance():
    rng = np.random.default_rng(12)
    values = rng.standard_t(3.0, 200)
    spread = values.max() - values.min()
    tol = 1e-10 * spread
    for shift in (-13.0, 4.5):
        a = catoni_mean(values + shift, alpha=0.2, tol=tol)
        b = catoni_mean(values, alpha=0.2, tol=tol) + shift
        assert a == pytest.approx(b, abs=2 * tol + 1e-12)


@pytest.mark.parametrize("kind", [SATURATING, LOG_QUADRATIC])
def test_root_residual_small_at_estimate(kind):
    rng = np.random.default_rng(13)
    values = rng.standard_t(2.5, 300)
    alpha = catoni_alpha(300, float(np.var(values, ddof=1)))
    spread = values.max() - values.min()
    est = catoni_mean(values, kind=kind, alpha=alpha)
    residual = np.sum(psi(alpha * (values - est), kind))
    # slope of psi is at most 1, so the root residual is at most
    # n * alpha * (half the final bracket width)
    assert abs(residual) <= values.size * alpha * (1e-10 * spread)


def test_monotone_response_to_appended_value():
    rng = np.random.default_rng(14)
    values = list(rng.standard_normal(50))
    base = catoni_mean(values, alpha=0.5)
    grown = catoni_mean(values + [base + 5.0], alpha=0.5)
    assert grown >= base - 1e-9


def test_estimate_stays_in_range():
    rng = np.random.default_rng(15)
    values = rng.standard_cauchy(100)
    est = catoni_mean(values)
    assert values.min() <= est <= values.max()


def test_single_value_and_errors():
    assert catoni_mean([42.0]) == 42.0
    with pytest.raises(ValueError):
        catoni_mean([])
    with pytest.raises(ValueError):
        catoni_mean([1.0, np.inf])
    with pytest.raises(ValueError):
        catoni_mean([1.0, 2.0], alpha=-1.0)
