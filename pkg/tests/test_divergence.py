import math

import numpy as np
import pytest
import scipy.stats

from covertcap.divergence import (
    DetectorBlindError,
    chi_squared,
    exact_binomial_tv,
    kl_divergence,
    tau_max,
    total_variation,
    tv_product_upper_bound,
)
from covertcap.specfn import LpdBudget

BUDGET = LpdBudget(eps_det=0.1, eps_dec=1e-3)

# frozen oracle values
TV_BOUND_N1 = 0.075848513941770859    # 0.5*sqrt(0.0225*e^0.0225)
TV_BOUND_N100 = 2.3101626366885234    # vacuous regime
TAU_MAX_EX = 0.013079188887861097     # 2*xi(0.1)*0.1/15
KL_EX = 0.010523168073960898          # direct-sum oracle, nats


def test_chi_squared_zero_iff_equal():
    assert chi_squared([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert chi_squared([0.31, 0.69], [0.3, 0.7]) > 0.0


def test_chi_squared_dx_marginal_example():
    # brute-force sum over the two outputs
    p, q = [0.26, 0.74], [0.2, 0.8]
    brute = sum((pi - qi) ** 2 / qi for pi, qi in zip(p, q))
    assert chi_squared(p, q) == pytest.approx(brute, rel=1e-15)
    assert chi_squared(p, q) == pytest.approx(0.0225, rel=1e-12)
    # closed form u^2 (1-2e)^2 / (e(1-e)) at u = 0.1, e = 0.2
    assert chi_squared(p, q) == pytest.approx(
        0.1**2 * (1 - 2 * 0.2) ** 2 / (0.2 * 0.8), rel=1e-12
    )


def test_chi_squared_third_example():
    assert chi_squared([0.5, 0.5], [0.25, 0.75]) == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_chi_squared_dominance():
    with pytest.raises(ValueError):
        chi_squared([0.5, 0.5], [1.0, 0.0])
    # zero-mass points of p are fine
    assert chi_squared([1.0, 0.0], [0.5, 0.5]) == pytest.approx(1.0)


def test_total_variation_examples():
    assert total_variation([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert total_variation([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert total_variation([0.26, 0.74], [0.2, 0.8]) == pytest.approx(0.06, abs=1e-15)


def test_kl_divergence_examples():
    assert kl_divergence([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2), rel=1e-15)
    assert kl_divergence([0.26, 0.74], [0.2, 0.8]) == pytest.approx(KL_EX, rel=1e-12)
    with pytest.raises(ValueError):
        kl_divergence([0.5, 0.5], [1.0, 0.0])


def test_tv_product_upper_bound_values():
    assert tv_product_upper_bound(5, 0.0) == 0.0
    assert tv_product_upper_bound(1, 0.0225) == pytest.approx(TV_BOUND_N1, rel=1e-13)
    # for n*chi2 large the bound is vacuous (> 1) by design
    assert tv_product_upper_bound(100, 0.0225) == pytest.approx(TV_BOUND_N100, rel=1e-13)
    with pytest.raises(ValueError):
        tv_product_upper_bound(0, 0.1)
    with pytest.raises(ValueError):
        tv_product_upper_bound(10, -0.1)


def test_tau_max_arithmetic():
    assert tau_max(10_000, BUDGET, 0.0225) == pytest.approx(TAU_MAX_EX, rel=1e-13)


def test_tau_max_limits_and_clamp():
    # O(1/sqrt(n)) decay
    assert tau_max(10**10, BUDGET, 0.0225) < 1e-4
    # clamped to 1 when the formula exceeds 1
    assert tau_max(1, BUDGET, 1e-8) == 1.0


def test_tau_max_detector_blind():
    with pytest.raises(DetectorBlindError):
        tau_max(100, BUDGET, 0.0)


def test_exact_binomial_tv_trivials():
    assert exact_binomial_tv(100, 0.3, 0.3) == 0.0
    assert exact_binomial_tv(1, 0.2, 0.26) == pytest.approx(0.06, abs=1e-14)


def test_exact_binomial_tv_against_scipy_pmf():
    for n, p0, p1 in ((10, 0.2, 0.3), (250, 0.05, 0.07), (1000, 0.4, 0.42)):
        k = np.arange(n + 1)
        ref = 0.5 * np.abs(
            scipy.stats.binom.pmf(k, n, p0) - scipy.stats.binom.pmf(k, n, p1)
        ).sum()
        assert exact_binomial_tv(n, p0, p1) == pytest.approx(ref, rel=1e-12)


def test_exact_binomial_tv_meets_detection_budget():
    # shifting eps_dx by the tau_max-configured amount keeps TV below eps_det
    n, eps_dx = 1000, 0.2
    chi_kernel = (1 - 2 * eps_dx) ** 2 / (eps_dx * (1 - eps_dx))
    delta = tau_max(n, BUDGET, chi_kernel) * (1 - 2 * eps_dx)
    tv = exact_binomial_tv(n, eps_dx, eps_dx + delta)
    assert tv <= BUDGET.eps_det


def test_exact_binomial_tv_domain():
    with pytest.raises(ValueError):
        exact_binomial_tv(0, 0.2, 0.3)
    with pytest.raises(ValueError):
        exact_binomial_tv(300_000, 0.2, 0.3)
    with pytest.raises(ValueError):
        exact_binomial_tv(10, -0.1, 0.3)


def test_pinsker_on_random_pairs():
    rng = np.random.Generator(np.random.Philox(key=np.array([11, 0], dtype=np.uint64)))
    for _ in range(100):
        k = int(rng.integers(2, 9))
        p = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k))
        assert total_variation(p, q) <= math.sqrt(kl_divergence(p, q) / 2.0) + 1e-12


def test_chi_squared_mixture_scaling_is_quadratic():
    rng = np.random.Generator(np.random.Philox(key=np.array([13, 0], dtype=np.uint64)))
    for _ in range(100):
        k = int(rng.integers(2, 9))
        kernel = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k)) + 0.02
        q /= q.sum()
        tau = float(rng.uniform())
        mix = (1 - tau) * q + tau * kernel
        assert chi_squared(mix, q) == pytest.approx(
            tau**2 * chi_squared(kernel, q), rel=1e-12, abs=1e-15
        )


def test_product_tv_chain_on_grid():
    # exact n-letter TV <= tensorised single-letter bound while non-vacuous
    for n in (10, 100, 1000):
        for eps_dx in (0.2, 0.4):
            for c in (0.3, 0.9):
                chi_kernel = (1 - 2 * eps_dx) ** 2 / (eps_dx * (1 - eps_dx))
                tau_u = c / math.sqrt(n * chi_kernel)
                q1 = (1 - tau_u) * eps_dx + tau_u * (1 - eps_dx)
                chi_single = chi_squared([1 - q1, q1], [1 - eps_dx, eps_dx])
                assert n * chi_single <= 1.0 + 1e-9
                assert exact_binomial_tv(n, eps_dx, q1) <= tv_product_upper_bound(
                    n, chi_single
                )
