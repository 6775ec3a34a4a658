"""Gallager exponent E0, mutual information, and sparse-input lower bounds.

All exponents are in nats; conversion to bits happens only in the bounds
layer.  Closed forms for the BSC and for Gaussian kernels on the AWGN
channel are provided alongside the generic discrete evaluation so the two
routes can be cross-checked.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.special import rel_entr

from .channels import DiscreteChannel, _as_probability_vector


class E0Value(NamedTuple):
    """An exponent value together with the rho it was evaluated at."""

    rho: float
    value: float


def _check_rho(rho: float):
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho!r}")


def e0_discrete(rho: float, input_dist, ch: DiscreteChannel) -> float:
    """Random-coding exponent E0 of a discrete memoryless channel, in nats.

    -log sum_y [ sum_x p(x) p(y|x)^(1/(1+rho)) ]^(1+rho).  Zero transition
    entries contribute zero; the result is clamped at 0 to absorb rounding
    at rho = 0 where the true value vanishes.
    """
    _check_rho(rho)
    p = _as_probability_vector(input_dist, "input_dist", tol=1e-9)
    if p.size != ch.num_inputs:
        raise ValueError("input_dist length does not match channel inputs")
    s = 1.0 / (1.0 + rho)
    inner = p @ np.power(ch.transition, s)
    total = float(np.power(inner, 1.0 + rho).sum())
    return max(0.0, -math.log(total))


def mutual_information(input_dist, ch: DiscreteChannel) -> float:
    """I(X;Y) in nats for the given input distribution and channel."""
    p = _as_probability_vector(input_dist, "input_dist", tol=1e-9)
    if p.size != ch.num_inputs:
        raise ValueError("input_dist length does not match channel inputs")
    joint = p[:, None] * ch.transition
    p_y = joint.sum(axis=0)
    return float(rel_entr(joint, p[:, None] * p_y[None, :]).sum())


def e0_sparse_lower_bounds(
    rho: float, tau: float, e0_kernel: float
) -> tuple[float, float]:
    """Lower bounds on E0 of a sparse input in terms of the kernel exponent.

    Returns (lb_log, lb_linear):

        lb_log    = -(1+rho) * log[1 - tau*(1 - exp(-e0_kernel/(1+rho)))]
        lb_linear = (1+rho) * tau * (1 - exp(-e0_kernel/(1+rho)))

    Both are >= 0 and lb_log >= lb_linear.  At tau = 1 the log form
    collapses to e0_kernel exactly; at tau = 0 or e0_kernel = 0 both vanish.
    """
    _check_rho(rho)
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must be in [0, 1], got {tau!r}")
    if e0_kernel < 0.0:
        raise ValueError(f"e0_kernel must be >= 0, got {e0_kernel!r}")
    y = tau * -math.expm1(-e0_kernel / (1.0 + rho))
    lb_log = -(1.0 + rho) * math.log1p(-y)
    lb_linear = (1.0 + rho) * y
    return lb_log, lb_linear


def e0_bsc(rho: float, u: float, eps_rx: float) -> float:
    """Closed-form E0 for a BSC with input distribution (1-u, u), in nats."""
    _check_rho(rho)
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must be in [0, 1], got {u!r}")
    if not 0.0 <= eps_rx <= 1.0:
        raise ValueError(f"eps_rx must be in [0, 1], got {eps_rx!r}")
    s = 1.0 / (1.0 + rho)
    a = (1.0 - eps_rx) ** s
    b = eps_rx**s
    total = ((1.0 - u) * a + u * b) ** (1.0 + rho) + ((1.0 - u) * b + u * a) ** (
        1.0 + rho
    )
    return max(0.0, -math.log(total))


def e0_awgn_gaussian(rho: float, power: float, sigma2_rx: float) -> float:
    """Closed-form E0 for a Gaussian kernel of variance `power` on an AWGN
    channel with noise variance sigma2_rx: (rho/2) * log(1 + P/((1+rho)*s2))."""
    _check_rho(rho)
    if not power > 0.0:
        raise ValueError(f"power must be > 0, got {power!r}")
    if not sigma2_rx > 0.0:
        raise ValueError(f"sigma2_rx must be > 0, got {sigma2_rx!r}")
    return 0.5 * rho * math.log1p(power / ((1.0 + rho) * sigma2_rx))


def chi2_awgn_gaussian(power: float, sigma2_dx: float) -> float:
    """Chi-squared divergence of the detector marginal induced by a Gaussian
    kernel from the innocent (pure noise) law: (1 - P^2/s2^2)^(-1/2) - 1.

    Diverges as power -> sigma2_dx; power >= sigma2_dx is a domain error.
    """
    if not power > 0.0:
        raise ValueError(f"power must be > 0, got {power!r}")
    if not sigma2_dx > 0.0:
        raise ValueError(f"sigma2_dx must be > 0, got {sigma2_dx!r}")
    r = power / sigma2_dx
    if r >= 1.0:
        raise ValueError(
            f"chi-squared divergent: power {power!r} >= sigma2_dx {sigma2_dx!r}"
        )
    # expm1/log1p form keeps full relative precision as power -> 0
    return math.expm1(-0.5 * math.log1p(-r * r))


def chi2_bsc_kernel(u: float, eps_dx: float) -> float:
    """Chi-squared divergence of the kernel-induced detector marginal for a
    BSC detector channel: u^2 * (1 - 2*eps_dx)^2 / (eps_dx*(1 - eps_dx)).

    This is the kernel-level quantity (scales with u^2); the mixture-level
    divergence at sparseness tau is tau^2 times this.  eps_dx in {0, 1}
    breaks dominance and is a domain error; eps_dx = 1/2 gives 0 (the
    detector channel is useless).
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must be in [0, 1], got {u!r}")
    if not 0.0 < eps_dx < 1.0:
        raise ValueError(
            f"eps_dx must be in (0, 1) for dominance, got {eps_dx!r}"
        )
    d = 1.0 - 2.0 * eps_dx
    return u * u * d * d / (eps_dx * (1.0 - eps_dx))
