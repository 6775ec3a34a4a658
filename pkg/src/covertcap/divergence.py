"""Divergences and the detection-constraint chain.

The adversary's optimal test satisfies alpha + beta = 1 - d_TV between its
n-letter observation laws.  The chain bounds that total variation by
(1/2) * sqrt(W0_inv(n * chi2)) in terms of the single-letter chi-squared
divergence, which in turn caps the sparseness factor tau.  An exact
binomial oracle (binary detector alphabet) verifies the chain end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, rel_entr, xlogy

from .specfn import LpdBudget, lambert_w0_inv

_MAX_BINOMIAL_N = 200_000


class DetectorBlindError(ValueError):
    """The detector channel carries no trace of the input (kernel-level
    chi-squared is zero): the sparseness constraint is vacuous and callers
    should switch to capacity-mode reporting."""


@dataclass(frozen=True)
class DetectionResult:
    """False-alarm and missed-detection probabilities of an optimal test."""

    alpha: float
    beta: float

    @property
    def error_sum(self) -> float:
        return self.alpha + self.beta


def _pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    pa = np.asarray(p, dtype=float)
    qa = np.asarray(q, dtype=float)
    if pa.shape != qa.shape or pa.ndim != 1:
        raise ValueError("p and q must be 1-D vectors of the same length")
    return pa, qa


def chi_squared(p, q) -> float:
    """Chi-squared divergence sum((p - q)^2 / q) over the support of q.

    Requires q to dominate p (q[i] = 0 implies p[i] = 0), mirroring the
    standing assumption that the innocent output law dominates the
    code-induced one.
    """
    pa, qa = _pair(p, q)
    zero = qa == 0.0
    if np.any(pa[zero] != 0.0):
        raise ValueError("q must dominate p: found q[i] = 0 with p[i] > 0")
    d = pa[~zero] - qa[~zero]
    return float(np.sum(d * d / qa[~zero]))


def total_variation(p, q) -> float:
    """Total variation distance (1/2) * sum |p - q|, in [0, 1]."""
    pa, qa = _pair(p, q)
    return 0.5 * float(np.abs(pa - qa).sum())


def kl_divergence(p, q) -> float:
    """Relative entropy sum p*log(p/q) in nats; q must dominate p."""
    pa, qa = _pair(p, q)
    zero = qa == 0.0
    if np.any(pa[zero] != 0.0):
        raise ValueError("q must dominate p: found q[i] = 0 with p[i] > 0")
    return float(rel_entr(pa, qa).sum())


def tv_product_upper_bound(n: int, chi2_single: float) -> float:
    """Upper bound on d_TV between n-fold product laws.

    Equals (1/2) * sqrt(W0_inv(n * chi2_single)); useful only while
    n * chi2_single is small (it exceeds 1 and goes vacuous otherwise).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if chi2_single < 0.0:
        raise ValueError(f"chi2_single must be >= 0, got {chi2_single!r}")
    return 0.5 * math.sqrt(lambert_w0_inv(n * chi2_single))


def tau_max(n: int, budget: LpdBudget, chi2_kernel: float) -> float:
    """Largest sparseness factor meeting the detection budget at blocklength n.

    min(1, 2*xi*eps_det / sqrt(n * chi2_kernel)) where chi2_kernel is the
    chi-squared divergence of the kernel-induced detector marginal from the
    innocent one.  chi2_kernel = 0 raises DetectorBlindError: tau is then
    unconstrained and the caller decides (capacity mode).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if chi2_kernel < 0.0:
        raise ValueError(f"chi2_kernel must be >= 0, got {chi2_kernel!r}")
    if chi2_kernel == 0.0:
        raise DetectorBlindError(
            "chi2_kernel is zero: detector-blind, sparseness unconstrained"
        )
    return min(1.0, 2.0 * budget.xi * budget.eps_det / math.sqrt(n * chi2_kernel))


def _binomial_log_pmf(n: int, p: float) -> np.ndarray:
    # log pmf over k = 0..n; xlogy handles p in {0, 1} (0*log 0 = 0)
    k = np.arange(n + 1, dtype=float)
    return (
        gammaln(n + 1.0)
        - gammaln(k + 1.0)
        - gammaln(n - k + 1.0)
        + xlogy(k, p)
        + xlogy(n - k, 1.0 - p)
    )


def _binomial_pmf(n: int, p: float) -> np.ndarray:
    # renormalised so the mass vector sums to 1 despite gammaln rounding;
    # keeps exact identities (error sum = 1 - TV) at large n
    pmf = np.exp(_binomial_log_pmf(n, p))
    return pmf / pmf.sum()


def exact_binomial_tv(n: int, p0: float, p1: float) -> float:
    """Exact total variation between Binomial(n, p0) and Binomial(n, p1).

    Sums |pmf difference| over k = 0..n with log-space pmf evaluation, so
    it stays finite-precision-safe up to n = 200000.  For i.i.d. binary
    detector observations this equals 1 - min(alpha + beta) of the optimal
    test.
    """
    if not 1 <= n <= _MAX_BINOMIAL_N:
        raise ValueError(f"n must be in [1, {_MAX_BINOMIAL_N}], got {n!r}")
    for name, p in (("p0", p0), ("p1", p1)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {p!r}")
    return 0.5 * float(np.abs(_binomial_pmf(n, p0) - _binomial_pmf(n, p1)).sum())
