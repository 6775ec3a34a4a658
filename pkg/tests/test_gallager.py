import math

import numpy as np
import pytest

from covertcap.channels import make_bsc
from covertcap.divergence import chi_squared
from covertcap.gallager import (
    chi2_awgn_gaussian,
    chi2_bsc_kernel,
    e0_awgn_gaussian,
    e0_bsc,
    e0_discrete,
    e0_sparse_lower_bounds,
    mutual_information,
)
from covertcap.verify import chi2_awgn_quadrature, e0_awgn_quadrature

# frozen oracle values
CUTOFF_BSC01 = 0.22314355131420976     # -ln(0.5*(1 + 2 sqrt(0.09)))
MI_UNIFORM_BSC01 = 0.36806420716849707  # ln 2 - Hb(0.1), nats
LB_LINEAR_EX = 0.17573593128807149
LB_LOG_EX = 0.18394104974701084


def test_e0_discrete_zero_at_rho_zero():
    for eps in (0.0, 0.1, 0.5):
        assert e0_discrete(0.0, [0.3, 0.7], make_bsc(eps)) == 0.0


def test_e0_discrete_noiseless_cutoff():
    assert e0_discrete(1.0, [0.5, 0.5], make_bsc(0.0)) == pytest.approx(
        math.log(2), rel=1e-14
    )


def test_e0_discrete_cutoff_rate_identity():
    # textbook cutoff rate of the BSC at rho = 1, uniform input
    got = e0_discrete(1.0, [0.5, 0.5], make_bsc(0.1))
    assert got == pytest.approx(CUTOFF_BSC01, rel=1e-13)
    direct = -math.log(0.5 * (1 + 2 * math.sqrt(0.1 * 0.9)))
    assert got == pytest.approx(direct, rel=1e-13)


def test_e0_discrete_domain():
    with pytest.raises(ValueError):
        e0_discrete(1.5, [0.5, 0.5], make_bsc(0.1))
    with pytest.raises(ValueError):
        e0_discrete(0.5, [0.5, 0.4], make_bsc(0.1))


def test_e0_bsc_matches_generic_on_grid():
    worst = 0.0
    for rho in np.linspace(0.0, 1.0, 20):
        for u, eps in ((0.05, 0.1), (0.3, 0.25), (0.9, 0.45), (1.0, 0.1)):
            a = e0_bsc(float(rho), u, eps)
            b = e0_discrete(float(rho), [1 - u, u], make_bsc(eps))
            worst = max(worst, abs(a - b))
    assert worst < 1e-12


def test_e0_bsc_trivials():
    assert e0_bsc(0.0, 0.3, 0.1) == 0.0
    for rho in (0.2, 0.7, 1.0):
        assert e0_bsc(rho, 0.5, 0.5) == pytest.approx(0.0, abs=1e-15)


def test_mutual_information_values():
    assert mutual_information([1.0, 0.0], make_bsc(0.1)) == pytest.approx(0.0, abs=1e-15)
    assert mutual_information([0.5, 0.5], make_bsc(0.0)) == pytest.approx(
        math.log(2), rel=1e-14
    )
    # binary entropy oracle: ln2 - Hb(0.1)
    hb = -(0.1 * math.log(0.1) + 0.9 * math.log(0.9))
    assert mutual_information([0.5, 0.5], make_bsc(0.1)) == pytest.approx(
        math.log(2) - hb, rel=1e-13
    )
    assert mutual_information([0.5, 0.5], make_bsc(0.1)) == pytest.approx(
        MI_UNIFORM_BSC01, rel=1e-13
    )


def test_sparse_lower_bounds_vanish():
    assert e0_sparse_lower_bounds(0.5, 0.0, 1.0) == (0.0, 0.0)
    assert e0_sparse_lower_bounds(0.5, 0.3, 0.0) == (0.0, 0.0)


def test_sparse_lower_bounds_frozen_example():
    lb_log, lb_lin = e0_sparse_lower_bounds(1.0, 0.3, math.log(2))
    assert lb_lin == pytest.approx(LB_LINEAR_EX, rel=1e-13)
    assert lb_log == pytest.approx(LB_LOG_EX, rel=1e-13)
    assert lb_log >= lb_lin


def test_sparse_lower_bounds_tau_one_collapse():
    for rho in np.linspace(0.0, 1.0, 7):
        for e0k in (0.01, 0.3, math.log(2)):
            lb_log, _ = e0_sparse_lower_bounds(float(rho), 1.0, e0k)
            assert lb_log == pytest.approx(e0k, abs=1e-12)


def test_sparse_exponent_inequality_grid():
    # full sparse-input exponent dominates both lower bounds
    ch = make_bsc(0.1)
    for rho in np.linspace(0.0, 1.0, 5):
        for u in (0.2, 0.6, 1.0):
            e0k = e0_bsc(float(rho), u, 0.1)
            for tau in (0.0, 0.4, 0.9):
                full = [1 - tau * u, tau * u]
                e0_full = e0_discrete(float(rho), full, ch)
                lb_log, lb_lin = e0_sparse_lower_bounds(float(rho), tau, e0k)
                assert e0_full >= lb_log - 1e-12
                assert lb_log >= lb_lin - 1e-15


def test_e0_slope_at_zero_is_mutual_information():
    rng = np.random.Generator(np.random.Philox(key=np.array([17, 0], dtype=np.uint64)))
    h = 1e-5
    for _ in range(20):
        eps = float(rng.uniform(0.01, 0.4))
        p1 = float(rng.uniform(0.05, 0.95))
        ch = make_bsc(eps)
        dist = [1 - p1, p1]
        slope = e0_discrete(h, dist, ch) / h
        mi = mutual_information(dist, ch)
        assert slope == pytest.approx(mi, rel=1e-3)


def test_e0_nondecreasing_and_concave_in_rho():
    rhos = np.linspace(0.0, 1.0, 21)
    for u, eps in ((0.5, 0.1), (0.2, 0.3), (0.8, 0.05)):
        vals = np.array([e0_discrete(float(r), [1 - u, u], make_bsc(eps)) for r in rhos])
        assert np.all(np.diff(vals) >= -1e-12)
        assert np.all(np.diff(vals, 2) <= 1e-10)


def test_e0_awgn_gaussian_values():
    assert e0_awgn_gaussian(0.0, 1.0, 1.0) == 0.0
    assert e0_awgn_gaussian(1.0, 1.0, 1.0) == pytest.approx(
        0.5 * math.log(1.5), rel=1e-14
    )
    # power -> 0 limit
    assert e0_awgn_gaussian(1.0, 1e-12, 1.0) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        e0_awgn_gaussian(0.5, -1.0, 1.0)


def test_chi2_awgn_gaussian_values():
    assert chi2_awgn_gaussian(0.6, 1.0) == pytest.approx(0.25, rel=1e-13)
    # quadratic for small power: chi2 ~ P^2 / (2 s2^2)
    assert chi2_awgn_gaussian(1e-6, 1.0) == pytest.approx(5e-13, rel=1e-6)
    with pytest.raises(ValueError):
        chi2_awgn_gaussian(1.0, 1.0)
    with pytest.raises(ValueError):
        chi2_awgn_gaussian(1.5, 1.0)


def test_chi2_bsc_kernel_values():
    for u in (0.0, 0.3, 1.0):
        assert chi2_bsc_kernel(u, 0.5) == 0.0
    assert chi2_bsc_kernel(0.0, 0.2) == 0.0
    assert chi2_bsc_kernel(1.0, 0.2) == pytest.approx(2.25, rel=1e-14)
    # brute-force oracle over the two detector outputs
    brute = chi_squared([0.2, 0.8], [0.8, 0.2])
    assert chi2_bsc_kernel(1.0, 0.2) == pytest.approx(brute, rel=1e-13)
    for bad in (0.0, 1.0):
        with pytest.raises(ValueError):
            chi2_bsc_kernel(0.5, bad)


def test_awgn_closed_forms_match_quadrature_spot():
    # acceptance covers the full grid; spot-check one point per form here
    assert e0_awgn_quadrature(0.5, 0.3, 1.0) == pytest.approx(
        e0_awgn_gaussian(0.5, 0.3, 1.0), abs=1e-9
    )
    assert chi2_awgn_quadrature(0.5, 1.0) == pytest.approx(
        chi2_awgn_gaussian(0.5, 1.0), abs=1e-9
    )
