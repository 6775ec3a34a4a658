import math

import mpmath as mp
import numpy as np
import pytest

from covertcap.bounds import (
    achievable_log2m,
    asymptotic_coefficient,
    awgn_asymptote,
    awgn_bound,
    awgn_bound_point,
    awgn_n_min,
    awgn_operating_point,
    awgn_rho_star,
    bsc_asymptote,
    bsc_bound_point,
    bsc_capacity_bits,
    bsc_operating_point,
    l_bsc,
    l_factor,
    optimal_blocklength,
    optimize_rho,
)
from covertcap.channels import make_bsc
from covertcap.divergence import DetectorBlindError, tau_max
from covertcap.gallager import (
    chi2_awgn_gaussian,
    chi2_bsc_kernel,
    e0_awgn_gaussian,
    e0_bsc,
    mutual_information,
)

from covertcap.specfn import LpdBudget

BUDGET = LpdBudget(eps_det=0.1, eps_dec=1e-3)

# frozen oracle values
L_FACTOR_EX = 1.1053368866739486
BSC_ASYMPTOTE_EX = 0.56998142282532755
K_STAR_1E3 = 9.965784284662087


def test_l_factor_trivials():
    assert l_factor(0.5, 0.0, 1.0, BUDGET) == 0.0
    assert l_factor(0.5, 1.0, 1e12, BUDGET) < 1e-5


def test_l_factor_frozen_example():
    got = l_factor(1.0, math.log(2), 2.25, BUDGET)
    assert got == pytest.approx(L_FACTOR_EX, rel=1e-13)


def test_l_factor_high_precision_recompute():
    # independent recomputation at 40 decimal digits
    with mp.workdps(40):
        xi = mp.e ** (-mp.lambertw(4 * mp.mpf("0.1") ** 2) / 2)
        expect = (2 * xi / mp.log(2)) * 2 * (1 - mp.e ** (-mp.log(2) / 2)) / mp.sqrt(mp.mpf("2.25"))
        assert l_factor(1.0, math.log(2), 2.25, BUDGET) == pytest.approx(
            float(expect), rel=1e-12
        )


def test_l_factor_errors():
    with pytest.raises(DetectorBlindError):
        l_factor(0.5, 1.0, 0.0, BUDGET)
    with pytest.raises(ValueError):
        l_factor(0.0, 1.0, 1.0, BUDGET)
    with pytest.raises(ValueError):
        l_factor(0.5, -1.0, 1.0, BUDGET)


def test_achievable_log2m_penalty_vanishes():
    nearly_sure = LpdBudget(eps_det=0.1, eps_dec=1.0 - 1e-12)
    val = achievable_log2m(1e4, 0.5, 2.0, nearly_sure)
    assert val == pytest.approx(0.1 * 100.0 * 2.0, abs=1e-9)


def test_achievable_log2m_break_even():
    # n chosen so the two terms cancel exactly
    rho, l_val = 0.5, 2.0
    n = (math.log2(1 / BUDGET.eps_dec) / (rho * BUDGET.eps_det * l_val)) ** 2
    assert achievable_log2m(n, rho, l_val, BUDGET) == pytest.approx(0.0, abs=1e-9)


def test_achievable_log2m_bsc_large_n_is_near_asymptote():
    # at n = 1e6 the best bound is positive and below the asymptotic slope
    pt = bsc_bound_point(1e6, 0.1, 0.3, BUDGET)
    ceiling = BSC_ASYMPTOTE_EX * 1000.0
    assert 0.0 < pt.log2_m < ceiling
    assert pt.log2_m == pytest.approx(409.054466, rel=1e-6)  # regression anchor


def test_optimize_rho_awgn_sixteen_nmin():
    # at n = 16*n_min the maximiser sits exactly at rho = 1
    n_min = awgn_n_min(1.0, 1.0, BUDGET)
    p = 1e-8
    res = optimize_rho(
        16.0 * n_min,
        lambda rho: e0_awgn_gaussian(rho, p, 1.0),
        chi2_awgn_gaussian(p, 1.0),
        BUDGET,
    )
    assert res.rho == pytest.approx(1.0, abs=1e-4)
    assert res.positive


def test_optimize_rho_decreases_with_n():
    n_min = awgn_n_min(1.0, 1.0, BUDGET)
    p = 1e-8

    def opt(n):
        return optimize_rho(
            n,
            lambda rho: e0_awgn_gaussian(rho, p, 1.0),
            chi2_awgn_gaussian(p, 1.0),
            BUDGET,
        )

    r64 = opt(64 * n_min)
    r_big = opt(10_000 * n_min)
    assert r64.rho < 1.0
    assert r_big.rho < r64.rho


def test_optimize_rho_flags_no_positive_rate():
    n_min = awgn_n_min(1.0, 1.0, BUDGET)
    p = 1e-8
    res = optimize_rho(
        n_min,
        lambda rho: e0_awgn_gaussian(rho, p, 1.0),
        chi2_awgn_gaussian(p, 1.0),
        BUDGET,
    )
    assert not res.positive
    assert res.log2_m < 0.0


def test_asymptotic_coefficient_values():
    assert asymptotic_coefficient(0.0, 1.0, BUDGET) == 0.0
    with pytest.raises(DetectorBlindError):
        asymptotic_coefficient(1.0, 0.0, BUDGET)


def test_asymptotic_coefficient_is_small_rho_limit():
    u, eps_rx, eps_dx = 0.5, 0.1, 0.3
    mi = mutual_information([1 - u, u], make_bsc(eps_rx))
    chi_k = chi2_bsc_kernel(u, eps_dx)
    coeff = asymptotic_coefficient(mi, chi_k, BUDGET)
    near = l_factor(1e-4, e0_bsc(1e-4, u, eps_rx), chi_k, BUDGET)
    assert near == pytest.approx(coeff, rel=1e-3)


def test_asymptotic_coefficient_bsc_identity():
    # two code paths for the small-u limit must agree to 1e-9
    eps_rx, eps_dx = 0.1, 0.3
    mi_rate = (1 - 2 * eps_rx) * math.log((1 - eps_rx) / eps_rx)
    coeff = asymptotic_coefficient(mi_rate, chi2_bsc_kernel(1.0, eps_dx), BUDGET)
    assert coeff * BUDGET.eps_det == pytest.approx(
        bsc_asymptote(eps_rx, eps_dx, BUDGET), rel=1e-9
    )


def test_optimal_blocklength_k_star():
    op = optimal_blocklength(1.0, 2.0, BUDGET)
    assert op.k_star == pytest.approx(K_STAR_1E3, rel=1e-12)
    half = LpdBudget(eps_det=0.1, eps_dec=0.5)
    assert optimal_blocklength(1.0, 2.0, half).k_star == pytest.approx(1.0, rel=1e-12)


def test_optimal_blocklength_identity_and_errors():
    for rho, l_val in ((0.3, 1.0), (0.8, 2.5), (1.0, 0.4)):
        op = optimal_blocklength(rho, l_val, BUDGET)
        assert op.n_star * op.r_star == pytest.approx(op.k_star, rel=1e-9)
        assert op.r_star > 0
    with pytest.raises(ValueError):
        optimal_blocklength(0.5, 0.0, BUDGET)


def test_optimal_blocklength_integer_grid_recovery():
    rho, l_val = 1.0, l_bsc(1.0, 0.1, 0.3, BUDGET)
    op = optimal_blocklength(rho, l_val, BUDGET)
    lo, hi = int(op.n_star / 2), int(op.n_star * 2)
    ns = np.arange(lo, hi + 1, dtype=float)
    rates = (
        BUDGET.eps_det * np.sqrt(ns) * l_val + math.log2(BUDGET.eps_dec) / rho
    ) / ns
    n_hat = float(ns[rates.argmax()])
    assert abs(n_hat - op.n_star) <= 1.0
    assert rates.max() == pytest.approx(op.r_star, rel=5e-3)


def test_l_bsc_edge_cases():
    assert l_bsc(0.7, 0.5, 0.3, BUDGET) == pytest.approx(0.0, abs=1e-15)
    assert l_bsc(0.7, 0.1, 0.0, BUDGET) == 0.0
    assert l_bsc(0.7, 0.1, 1.0, BUDGET) == 0.0
    with pytest.raises(DetectorBlindError):
        l_bsc(0.7, 0.1, 0.5, BUDGET)
    with pytest.raises(ValueError):
        l_bsc(0.0, 0.1, 0.3, BUDGET)
    # receiver relabelling symmetry
    assert l_bsc(0.6, 0.2, 0.3, BUDGET) == pytest.approx(
        l_bsc(0.6, 0.8, 0.3, BUDGET), rel=1e-12
    )


def test_l_bsc_matches_generic_pipeline_at_small_u():
    u = 1e-6
    for rho in (0.1, 0.5, 1.0):
        for eps_rx, eps_dx in ((0.05, 0.2), (0.1, 0.3), (0.2, 0.4)):
            generic = l_factor(
                rho, e0_bsc(rho, u, eps_rx), chi2_bsc_kernel(u, eps_dx), BUDGET
            )
            assert generic == pytest.approx(
                l_bsc(rho, eps_rx, eps_dx, BUDGET), rel=1e-4
            )


def test_generic_bsc_pipeline_monotone_in_u():
    prev = None
    for u in np.geomspace(1e-6, 1.0, 10):
        val = l_factor(
            0.5, e0_bsc(0.5, float(u), 0.1), chi2_bsc_kernel(float(u), 0.3), BUDGET
        )
        if prev is not None:
            assert val <= prev + 1e-12
        prev = val


def test_bsc_asymptote_value():
    got = bsc_asymptote(0.1, 0.3, BUDGET)
    assert got == pytest.approx(BSC_ASYMPTOTE_EX, rel=1e-12)
    assert abs(got - 0.5700) <= 1e-3


def test_bsc_asymptote_limits():
    assert bsc_asymptote(0.499999, 0.3, BUDGET) < 1e-4
    assert bsc_asymptote(0.1, 0.0, BUDGET) == 0.0
    with pytest.raises(ValueError):
        bsc_asymptote(0.6, 0.3, BUDGET)
    with pytest.raises(DetectorBlindError):
        bsc_asymptote(0.1, 0.5, BUDGET)


def test_bsc_asymptote_is_small_rho_limit_of_l():
    asym = bsc_asymptote(0.1, 0.3, BUDGET)
    near = l_bsc(1e-5, 0.1, 0.3, BUDGET) * BUDGET.eps_det
    assert near == pytest.approx(asym, rel=1e-3)


def test_awgn_bound_linear_in_noise_ratio():
    n, rho = 1e5, 0.4
    pen = math.log2(BUDGET.eps_dec) / rho
    single = awgn_bound(n, rho, 1.0, 1.0, BUDGET) - pen
    double = awgn_bound(n, rho, 1.0, 2.0, BUDGET) - pen
    assert double == pytest.approx(2.0 * single, rel=1e-12)


def test_awgn_bound_matches_generic_pipeline():
    p = 1e-8
    for rho in (0.2, 0.6, 1.0):
        generic = l_factor(
            rho, e0_awgn_gaussian(rho, p, 1.0), chi2_awgn_gaussian(p, 2.0), BUDGET
        )
        n = 4e4
        closed = (awgn_bound(n, rho, 1.0, 2.0, BUDGET) - math.log2(BUDGET.eps_dec) / rho) / (
            BUDGET.eps_det * math.sqrt(n)
        )
        assert generic == pytest.approx(closed, rel=1e-4)


def test_awgn_bound_zero_crossing_at_n_min():
    n_min = awgn_n_min(1.0, 1.0, BUDGET)
    amp = math.sqrt(2 * n_min) * BUDGET.eps_det * BUDGET.xi / math.log(2)
    sup = max(
        amp / (1 + rho) + math.log2(BUDGET.eps_dec) / rho
        for rho in np.geomspace(1e-6, 1e5, 4000)
    )
    assert abs(sup) < 1e-6
    # with rho capped at 1 the bound turns positive at 4*n_min
    assert awgn_bound(n_min, 1.0, 1.0, 1.0, BUDGET) < 0
    assert awgn_bound(3.99 * n_min, 1.0, 1.0, 1.0, BUDGET) < 0
    assert awgn_bound(4.01 * n_min, 1.0, 1.0, 1.0, BUDGET) > 0


def test_awgn_rho_star_clamping():
    n_min = 100.0
    assert awgn_rho_star(16 * n_min, n_min) == pytest.approx(1.0, abs=1e-12)
    assert awgn_rho_star(8 * n_min, n_min) == 1.0
    assert awgn_rho_star(0.5 * n_min, n_min) == 1.0
    r = 64.0
    expect = (1 + r**0.25) / (math.sqrt(r) - 1)
    assert awgn_rho_star(r * n_min, n_min) == pytest.approx(expect, rel=1e-12)
    assert awgn_rho_star(16.001 * n_min, n_min) < 1.0


def test_awgn_rho_star_matches_grid_search():
    n_min = awgn_n_min(1.0, 1.0, BUDGET)
    rho_grid = np.geomspace(1e-6, 1.0, 20_000)
    for mult in (2.0, 8.0, 32.0):
        n = mult * n_min
        engine = awgn_bound(n, awgn_rho_star(n, n_min), 1.0, 1.0, BUDGET)
        brute = max(awgn_bound(n, float(r), 1.0, 1.0, BUDGET) for r in rho_grid)
        assert engine == pytest.approx(brute, rel=1e-3)


def test_awgn_operating_point_identities():
    for ratio in (0.5, 1.0, 2.0):
        op = awgn_operating_point(1.0, ratio, BUDGET)
        assert op.k_star == pytest.approx(K_STAR_1E3, abs=1e-9)
        assert op.n_star / op.n_min == pytest.approx(16.0, abs=1e-9)
        assert awgn_rho_star(op.n_star, op.n_min) == pytest.approx(1.0, abs=1e-6)
        assert op.n_star * op.r_star == pytest.approx(op.k_star, rel=1e-9)


def test_awgn_peak_rate_scales_with_fourth_power_ratio():
    base = awgn_operating_point(1.0, 1.0, BUDGET).r_star
    assert awgn_operating_point(1.0, 2.0, BUDGET).r_star == pytest.approx(
        4.0 * base, rel=1e-12
    )
    assert awgn_operating_point(1.0, 4.0, BUDGET).r_star == pytest.approx(
        16.0 * base, rel=1e-12
    )


def test_bsc_operating_point_matches_brute_force():
    op = bsc_operating_point(0.1, 0.3, BUDGET)
    rho_grid = np.linspace(1e-3, 1.0, 400)
    l_vals = np.array([l_bsc(float(r), 0.1, 0.3, BUDGET) for r in rho_grid])
    n_grid = np.geomspace(op.n_star / 4, op.n_star * 4, 900)
    log2m = BUDGET.eps_det * np.sqrt(n_grid)[:, None] * l_vals[None, :] + math.log2(
        BUDGET.eps_dec
    ) / rho_grid[None, :]
    rate = log2m / n_grid[:, None]
    i = int(np.unravel_index(rate.argmax(), rate.shape)[0])
    assert abs(float(n_grid[i]) - op.n_star) / op.n_star <= 0.005
    assert float(rate.max()) == pytest.approx(op.r_star, rel=0.005)


def test_bound_point_respects_tau_cap():
    pt = bsc_bound_point(5000, 0.1, 0.3, BUDGET)
    cap = tau_max(5000, BUDGET, chi2_bsc_kernel(1.0, 0.3))
    assert pt.tau == pytest.approx(cap, rel=1e-12)
    assert 0.0 <= pt.rho <= 1.0
    assert pt.rate == max(0.0, pt.log2_m) / pt.n


def test_bound_point_silent_detector():
    pt = bsc_bound_point(5000, 0.1, 0.0, BUDGET)
    assert pt.tau == 0.0
    assert pt.rate == 0.0
    assert pt.log2_m < 0.0


def test_rate_curve_shape_and_approach():
    n_grid = np.geomspace(1e2, 1e8, 25)
    rates = np.array([bsc_bound_point(float(n), 0.1, 0.3, BUDGET).rate for n in n_grid])
    peak = int(rates.argmax())
    assert 0 < peak < len(n_grid) - 1
    d = np.diff(rates)
    positive = rates[:-1] > 0
    assert np.all(d[:peak][positive[:peak]] > 0)
    assert np.all(d[peak:] < 0)
    ratios = rates * np.sqrt(n_grid) / bsc_asymptote(0.1, 0.3, BUDGET)
    assert np.all(ratios <= 1.0 + 1e-12)
    assert np.all(np.diff(ratios[peak:]) > 0)  # monotone approach from below


def test_capacity_helper():
    assert bsc_capacity_bits(0.0) == 1.0
    assert bsc_capacity_bits(0.5) == pytest.approx(0.0, abs=1e-15)
    h2 = -(0.1 * math.log2(0.1) + 0.9 * math.log2(0.9))
    assert bsc_capacity_bits(0.1) == pytest.approx(1.0 - h2, rel=1e-13)


def test_awgn_bound_point_fields():
    pt = awgn_bound_point(1e5, 1.0, 2.0, BUDGET)
    assert pt.tau == 1.0
    n_min = awgn_n_min(1.0, 2.0, BUDGET)
    assert pt.rho == pytest.approx(awgn_rho_star(1e5, n_min), rel=1e-12)
    assert pt.rate > 0


def test_awgn_asymptote_matches_bound_first_term():
    # the first term of the bound at rho -> 0 equals asymptote * sqrt(n)
    n = 1e6
    asym = awgn_asymptote(1.0, 2.0, BUDGET)
    rho = 1e-6
    pen = math.log2(BUDGET.eps_dec) / rho
    got = (awgn_bound(n, rho, 1.0, 2.0, BUDGET) - pen) / math.sqrt(n)
    assert got == pytest.approx(asym, rel=1e-5)
    # at rho = 1 the first term is halved, so it sits strictly below
    first_at_one = awgn_bound(n, 1.0, 1.0, 2.0, BUDGET) - math.log2(BUDGET.eps_dec)
    assert first_at_one < asym * math.sqrt(n)
