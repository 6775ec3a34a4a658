"""Achievability engine for covert communication bounds.

Combines the sparse-input exponent bound with the sparseness cap into the
finite-blocklength bound

    log2 M >= eps_det * sqrt(n) * L(rho) + (1/rho) * log2(eps_dec),

where L collects the kernel exponent, the kernel-level chi-squared
divergence and the xi factor.  Closed forms are provided for the BSC
(vanishing-kernel-mass limit) and the AWGN channel (vanishing-kernel-power
limit), together with the peak-rate operating points.

Sweep points over a blocklength grid are independent of each other: they
may be evaluated in any order (or in parallel) without changing results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .divergence import DetectorBlindError, tau_max
from .gallager import chi2_bsc_kernel
from .specfn import LpdBudget

_LN2 = math.log(2.0)
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

#: lower end of the rho search interval; L(rho) stays finite as rho -> 0 but
#: the (1/rho)*log2(eps_dec) penalty diverges, so the optimum is interior.
RHO_FLOOR = 1e-6


@dataclass(frozen=True)
class BoundPoint:
    """Evaluated achievability bound at one blocklength.

    log2_m keeps its raw (possibly negative) value for break-even analysis;
    rate is clamped at zero.
    """

    n: float
    rho: float
    tau: float
    log2_m: float
    rate: float

    @classmethod
    def from_log2m(cls, n, rho, tau, log2_m) -> "BoundPoint":
        return cls(n=n, rho=rho, tau=tau, log2_m=log2_m, rate=max(0.0, log2_m) / n)


@dataclass(frozen=True)
class OptimalOperating:
    """Peak-rate operating point: blocklength n*, rate R(n*), bits k*.

    n_min is populated for the AWGN channel only (smallest blocklength at
    which the unconstrained-rho bound crosses zero).
    """

    n_star: float
    r_star: float
    k_star: float
    rho_used: float
    n_min: float | None = None


class RhoOptimum(NamedTuple):
    """Result of maximising the bound over rho at fixed blocklength."""

    rho: float
    log2_m: float
    positive: bool


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section maximum of a unimodal f on [lo, hi].

    Endpoints are evaluated too, so boundary maxima are returned exactly.
    """
    a, b = lo, hi
    c = b - (b - a) * _INV_PHI
    d = a + (b - a) * _INV_PHI
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * _INV_PHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * _INV_PHI
            fd = f(d)
    x = 0.5 * (a + b)
    best_x, best_f = x, f(x)
    for cand in (lo, hi):
        fcand = f(cand)
        if fcand > best_f:
            best_x, best_f = cand, fcand
    return best_x, best_f


def _check_rho_positive(rho: float):
    if not 0.0 < rho <= 1.0:
        raise ValueError(f"rho must be in (0, 1], got {rho!r}")


def l_factor(
    rho: float, e0_kernel: float, chi2_kernel: float, budget: LpdBudget
) -> float:
    """Per-(eps_det*sqrt(n)) bits coefficient L(rho) of the generic pipeline.

    (2*xi/ln 2) * ((1+rho)/rho) * (1 - exp(-e0_kernel/(1+rho))) / sqrt(chi2_kernel)

    e0_kernel is the kernel exponent in nats, chi2_kernel the kernel-level
    chi-squared divergence at the detector.  chi2_kernel = 0 raises
    DetectorBlindError (capacity mode, see the BSC helpers).
    """
    _check_rho_positive(rho)
    if e0_kernel < 0.0:
        raise ValueError(f"e0_kernel must be >= 0, got {e0_kernel!r}")
    if chi2_kernel < 0.0:
        raise ValueError(f"chi2_kernel must be >= 0, got {chi2_kernel!r}")
    if chi2_kernel == 0.0:
        raise DetectorBlindError(
            "chi2_kernel is zero: detector-blind, rate is capacity-limited"
        )
    gain = -math.expm1(-e0_kernel / (1.0 + rho))
    return (2.0 * budget.xi / _LN2) * ((1.0 + rho) / rho) * gain / math.sqrt(chi2_kernel)


def achievable_log2m(n: float, rho: float, l_value: float, budget: LpdBudget) -> float:
    """Achievable log2 M at blocklength n for a given rho and L(rho).

    eps_det * sqrt(n) * L + (1/rho) * log2(eps_dec); the second term is the
    (negative) decoding-reliability penalty.
    """
    if not n > 0:
        raise ValueError(f"n must be > 0, got {n!r}")
    _check_rho_positive(rho)
    return budget.eps_det * math.sqrt(n) * l_value + math.log2(budget.eps_dec) / rho


def optimize_rho(
    n: float,
    e0_kernel_fn: Callable[[float], float],
    chi2_kernel: float,
    budget: LpdBudget,
    rho_floor: float = RHO_FLOOR,
    tol: float = 1e-6,
) -> RhoOptimum:
    """Maximise the achievable log2 M over rho in [rho_floor, 1].

    Golden-section search; the objective is empirically unimodal for the
    channels treated here.  A non-positive maximum is returned unclamped
    with positive=False.
    """
    if not n > 0:
        raise ValueError(f"n must be > 0, got {n!r}")

    def objective(rho: float) -> float:
        l_val = l_factor(rho, e0_kernel_fn(rho), chi2_kernel, budget)
        return achievable_log2m(n, rho, l_val, budget)

    rho_opt, best = _golden_max(objective, rho_floor, 1.0, tol)
    return RhoOptimum(rho=rho_opt, log2_m=best, positive=best > 0.0)


def asymptotic_coefficient(
    kernel_mi: float, chi2_kernel: float, budget: LpdBudget
) -> float:
    """Large-blocklength coefficient lim log2(M) / (eps_det * sqrt(n)).

    (2*xi/ln 2) * kernel_mi / sqrt(chi2_kernel) with kernel_mi in nats;
    equals the rho -> 0 limit of l_factor with the same kernel.
    """
    if kernel_mi < 0.0:
        raise ValueError(f"kernel_mi must be >= 0, got {kernel_mi!r}")
    if chi2_kernel < 0.0:
        raise ValueError(f"chi2_kernel must be >= 0, got {chi2_kernel!r}")
    if chi2_kernel == 0.0:
        raise DetectorBlindError(
            "chi2_kernel is zero: detector-blind, rate is capacity-limited"
        )
    return (2.0 * budget.xi / _LN2) * kernel_mi / math.sqrt(chi2_kernel)


def optimal_blocklength(rho: float, l_value: float, budget: LpdBudget) -> OptimalOperating:
    """Rate-optimal blocklength for fixed rho and L.

    sqrt(n*) = 2*log2(1/eps_dec) / (eps_det*rho*L), with peak rate
    R(n*) = eps_det^2*rho*L^2 / (4*log2(1/eps_dec)) and k* = n* R(n*)
    = (1/rho)*log2(1/eps_dec) bits.
    """
    _check_rho_positive(rho)
    if not l_value > 0.0:
        raise ValueError(f"L must be > 0 for a positive covert rate, got {l_value!r}")
    bits = math.log2(1.0 / budget.eps_dec)
    sqrt_n = 2.0 * bits / (budget.eps_det * rho * l_value)
    r_star = budget.eps_det**2 * rho * l_value**2 / (4.0 * bits)
    return OptimalOperating(
        n_star=sqrt_n * sqrt_n,
        r_star=r_star,
        k_star=bits / rho,
        rho_used=rho,
    )


# ---------------------------------------------------------------------------
# BSC closed forms (vanishing kernel mass)
# ---------------------------------------------------------------------------


def l_bsc(rho: float, eps_rx: float, eps_dx: float, budget: LpdBudget) -> float:
    """Closed-form L(rho) for independent binary symmetric channels.

    (2*xi/ln 2) * ((1+rho)/rho) * sqrt(eps_dx*(1-eps_dx))/|1-2*eps_dx|
      * [(1-e)^(1/(1+rho)) - e^(1/(1+rho))] * [(1-e)^(rho/(1+rho)) - e^(rho/(1+rho))]

    with e = eps_rx.  This is the vanishing-kernel-mass limit of the generic
    pipeline and upper-bounds it for every positive kernel mass.  eps_dx in
    {0, 1} returns 0 (a perfect or perfectly inverted detector channel
    admits no covert transmission); eps_dx = 1/2 raises DetectorBlindError.
    The expression is symmetric under eps_rx -> 1 - eps_rx (output
    relabelling at the receiver).
    """
    _check_rho_positive(rho)
    if not 0.0 < eps_rx < 1.0:
        raise ValueError(f"eps_rx must be in (0, 1), got {eps_rx!r}")
    if not 0.0 <= eps_dx <= 1.0:
        raise ValueError(f"eps_dx must be in [0, 1], got {eps_dx!r}")
    if eps_dx == 0.5:
        raise DetectorBlindError(
            "eps_dx = 1/2: detector-blind, rate is capacity-limited"
        )
    if eps_dx in (0.0, 1.0):
        return 0.0
    s = 1.0 / (1.0 + rho)
    b1 = (1.0 - eps_rx) ** s - eps_rx**s
    b2 = (1.0 - eps_rx) ** (rho * s) - eps_rx ** (rho * s)
    k_dx = math.sqrt(eps_dx * (1.0 - eps_dx)) / abs(1.0 - 2.0 * eps_dx)
    return (2.0 * budget.xi / _LN2) * ((1.0 + rho) / rho) * k_dx * b1 * b2


def bsc_asymptote(eps_rx: float, eps_dx: float, budget: LpdBudget) -> float:
    """Large-blocklength slope lim log2(M)/sqrt(n) for the BSC pair, in
    bits per sqrt(channel use).

    2 * eps_det * xi * sqrt(eps_dx*(1-eps_dx)) * (1-2*eps_rx)/|1-2*eps_dx|
      * log2((1-eps_rx)/eps_rx)

    Requires eps_rx in (0, 1/2); for eps_rx > 1/2 relabel the receiver
    outputs first.  Detector-channel edge cases behave as in l_bsc.
    """
    if not 0.0 < eps_rx < 0.5:
        raise ValueError(
            f"eps_rx must be in (0, 0.5), got {eps_rx!r}; "
            "for eps_rx > 0.5 relabel the receiver outputs"
        )
    if not 0.0 <= eps_dx <= 1.0:
        raise ValueError(f"eps_dx must be in [0, 1], got {eps_dx!r}")
    if eps_dx == 0.5:
        raise DetectorBlindError(
            "eps_dx = 1/2: detector-blind, rate is capacity-limited"
        )
    if eps_dx in (0.0, 1.0):
        return 0.0
    return (
        2.0
        * budget.eps_det
        * budget.xi
        * math.sqrt(eps_dx * (1.0 - eps_dx))
        * (1.0 - 2.0 * eps_rx)
        / abs(1.0 - 2.0 * eps_dx)
        * math.log2((1.0 - eps_rx) / eps_rx)
    )


def bsc_capacity_bits(eps_rx: float) -> float:
    """Capacity of a BSC in bits per use (the detector-blind ceiling)."""
    if not 0.0 <= eps_rx <= 1.0:
        raise ValueError(f"eps_rx must be in [0, 1], got {eps_rx!r}")
    if eps_rx in (0.0, 1.0):
        return 1.0
    h2 = -(eps_rx * math.log2(eps_rx) + (1.0 - eps_rx) * math.log2(1.0 - eps_rx))
    return 1.0 - h2


def bsc_bound_point(
    n: float, eps_rx: float, eps_dx: float, budget: LpdBudget, tol: float = 1e-6
) -> BoundPoint:
    """Best achievable bound at blocklength n for the BSC pair.

    rho is optimised by golden-section search of the closed form; tau is
    reported for the all-ones kernel (u = 1), i.e. as the per-use
    probability of transmitting the non-innocent symbol.
    """
    if eps_dx in (0.0, 1.0):
        tau = 0.0
    else:
        tau = tau_max(max(1, round(n)), budget, chi2_bsc_kernel(1.0, eps_dx))

    def objective(rho: float) -> float:
        return achievable_log2m(n, rho, l_bsc(rho, eps_rx, eps_dx, budget), budget)

    rho_opt, log2_m = _golden_max(objective, RHO_FLOOR, 1.0, tol)
    return BoundPoint.from_log2m(n, rho_opt, tau, log2_m)


def bsc_operating_point(
    eps_rx: float, eps_dx: float, budget: LpdBudget, tol: float = 1e-9
) -> OptimalOperating:
    """Peak-rate operating point for the BSC pair.

    The peak rate maximises rho * L(rho)^2 over rho in (0, 1]; the
    blocklength and bit count then follow from optimal_blocklength.
    """
    if not 0.0 < eps_rx < 0.5:
        raise ValueError(
            f"eps_rx must be in (0, 0.5), got {eps_rx!r}; "
            "for eps_rx > 0.5 relabel the receiver outputs"
        )

    def objective(rho: float) -> float:
        return rho * l_bsc(rho, eps_rx, eps_dx, budget) ** 2

    rho_opt, _ = _golden_max(objective, RHO_FLOOR, 1.0, tol)
    l_val = l_bsc(rho_opt, eps_rx, eps_dx, budget)
    if l_val <= 0.0:
        raise ValueError("no positive covert rate for these parameters")
    return optimal_blocklength(rho_opt, l_val, budget)


# ---------------------------------------------------------------------------
# AWGN closed forms (vanishing kernel power)
# ---------------------------------------------------------------------------


def awgn_bound(
    n: float, rho: float, sigma2_rx: float, sigma2_dx: float, budget: LpdBudget
) -> float:
    """Achievable log2 M for independent AWGN channels, Gaussian kernel in
    the vanishing-power limit.

    sqrt(2n) * eps_det * xi * (sigma2_dx/sigma2_rx) / ((1+rho) * ln 2)
      + (1/rho) * log2(eps_dec)
    """
    if not n > 0:
        raise ValueError(f"n must be > 0, got {n!r}")
    _check_rho_positive(rho)
    _check_variances(sigma2_rx, sigma2_dx)
    first = (
        math.sqrt(2.0 * n)
        * budget.eps_det
        * budget.xi
        * (sigma2_dx / sigma2_rx)
        / ((1.0 + rho) * _LN2)
    )
    return first + math.log2(budget.eps_dec) / rho


def _check_variances(sigma2_rx: float, sigma2_dx: float):
    if not sigma2_rx > 0.0:
        raise ValueError(f"sigma2_rx must be > 0, got {sigma2_rx!r}")
    if not sigma2_dx > 0.0:
        raise ValueError(f"sigma2_dx must be > 0, got {sigma2_dx!r}")


def awgn_n_min(sigma2_rx: float, sigma2_dx: float, budget: LpdBudget) -> float:
    """Blocklength below which no positive covert rate is achievable even
    with the reliability exponent parameter unconstrained.

    sigma2_rx^2 * ln(1/eps_dec)^2 / (2 * xi^2 * eps_det^2 * sigma2_dx^2).
    With rho capped at 1 (the random-coding range), the bound actually
    turns positive at 4 * n_min.
    """
    _check_variances(sigma2_rx, sigma2_dx)
    log_term = math.log(1.0 / budget.eps_dec)
    return (
        (sigma2_rx / sigma2_dx) ** 2
        * log_term
        * log_term
        / (2.0 * budget.xi**2 * budget.eps_det**2)
    )


def awgn_rho_star(n: float, n_min: float) -> float:
    """Bound-maximising rho at blocklength n, clamped to [0, 1].

    (1 + (n/n_min)^(1/4)) / (sqrt(n/n_min) - 1); the unclamped expression
    exceeds 1 for n < 16*n_min, and for n <= n_min the (negative) bound is
    least negative at rho = 1, so both regimes clamp to 1.
    """
    if not n > 0:
        raise ValueError(f"n must be > 0, got {n!r}")
    if not n_min > 0:
        raise ValueError(f"n_min must be > 0, got {n_min!r}")
    r = n / n_min
    den = math.sqrt(r) - 1.0
    if den <= 0.0:
        return 1.0
    return min(1.0, (1.0 + r**0.25) / den)


def awgn_bound_point(
    n: float, sigma2_rx: float, sigma2_dx: float, budget: LpdBudget
) -> BoundPoint:
    """Best achievable bound at blocklength n for the AWGN pair.

    tau is reported as 1.0: in the vanishing-kernel-power limit the
    sparseness cap is slack (the kernel power, not tau, meets the
    detection budget).
    """
    n_min = awgn_n_min(sigma2_rx, sigma2_dx, budget)
    rho = awgn_rho_star(n, n_min)
    log2_m = awgn_bound(n, rho, sigma2_rx, sigma2_dx, budget)
    return BoundPoint.from_log2m(n, rho, 1.0, log2_m)


def awgn_operating_point(
    sigma2_rx: float, sigma2_dx: float, budget: LpdBudget
) -> OptimalOperating:
    """Closed-form peak operating point for the AWGN pair.

    n* = 8 * ln(eps_dec)^2 * (sigma2_rx/sigma2_dx)^2 / (eps_det^2 * xi^2),
    R(n*) = eps_det^2 * xi^2 * (sigma2_dx/sigma2_rx)^2
            / (8 * ln 2 * ln(1/eps_dec)),
    k* = log2(1/eps_dec) regardless of the noise ratio; n*/n_min = 16 and
    the maximising rho at n* is exactly 1.
    """
    _check_variances(sigma2_rx, sigma2_dx)
    log_term = math.log(1.0 / budget.eps_dec)
    scale = (budget.eps_det * budget.xi) ** 2
    ratio4 = (sigma2_dx / sigma2_rx) ** 2
    n_star = 8.0 * log_term * log_term / (scale * ratio4)
    r_star = scale * ratio4 / (8.0 * _LN2 * log_term)
    return OptimalOperating(
        n_star=n_star,
        r_star=r_star,
        k_star=math.log2(1.0 / budget.eps_dec),
        rho_used=1.0,
        n_min=awgn_n_min(sigma2_rx, sigma2_dx, budget),
    )


def awgn_asymptote(sigma2_rx: float, sigma2_dx: float, budget: LpdBudget) -> float:
    """Large-blocklength slope lim log2(M)/sqrt(n) for the AWGN pair, in
    bits per sqrt(channel use): sqrt(2)*eps_det*xi*(sigma2_dx/sigma2_rx)/ln 2."""
    _check_variances(sigma2_rx, sigma2_dx)
    return math.sqrt(2.0) * budget.eps_det * budget.xi * (sigma2_dx / sigma2_rx) / _LN2
