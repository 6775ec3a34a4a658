"""Independent verification harness.

Three kinds of evidence back the achievability engine:

* exact detection-error computation for binary detector alphabets (the
  number of observed ones is a sufficient statistic, so the optimal test
  reduces to an exact binomial comparison);
* Monte Carlo random-coding simulation of maximum-likelihood decoding,
  checked against the ensemble-average decoding-error bound;
* an oracle battery that re-derives every closed form and limit used by
  the engine through an independent route (quadrature, brute-force grids,
  finite differences, high-density inequality grids).

Randomness uses the counter-based Philox generator ("philox4x64"); every
unit of work derives its stream from (seed, unit index), so serial and
parallel executions produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import bounds as bd
from .channels import make_bsc
from .divergence import (
    DetectionResult,
    chi_squared,
    exact_binomial_tv,
    kl_divergence,
    tau_max,
    total_variation,
    tv_product_upper_bound,
    _binomial_pmf,
)
from .gallager import (
    chi2_awgn_gaussian,
    chi2_bsc_kernel,
    e0_awgn_gaussian,
    e0_bsc,
    e0_discrete,
    e0_sparse_lower_bounds,
    mutual_information,
)
from .specfn import LpdBudget, lambert_w0, lambert_w0_inv

RNG_ALGORITHM = "philox4x64"
DEFAULT_SEED = 1729

_LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# exact detection error
# ---------------------------------------------------------------------------


def detection_error_sum_exact(n: int, tau_u: float, eps_dx: float) -> DetectionResult:
    """Exact detection error sum of the optimal test, binary detector alphabet.

    Under transmission each detector observation is Bernoulli with
    q1 = (1 - tau_u)*eps_dx + tau_u*(1 - eps_dx); the count of ones is a
    sufficient statistic, so the minimal-sum test decides "transmission"
    exactly where the Binomial(n, q1) pmf exceeds the Binomial(n, eps_dx)
    pmf.  The test is deterministic (no randomisation at ties); ties do not
    change alpha + beta.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if not 0.0 <= tau_u <= 1.0:
        raise ValueError(f"tau_u must be in [0, 1], got {tau_u!r}")
    if not 0.0 <= eps_dx <= 1.0:
        raise ValueError(f"eps_dx must be in [0, 1], got {eps_dx!r}")
    q1 = (1.0 - tau_u) * eps_dx + tau_u * (1.0 - eps_dx)
    pmf0 = _binomial_pmf(n, eps_dx)
    pmf1 = _binomial_pmf(n, q1)
    decide_h1 = pmf1 > pmf0
    alpha = float(pmf0[decide_h1].sum())
    beta = float(pmf1[~decide_h1].sum())
    return DetectionResult(alpha=alpha, beta=beta)


# ---------------------------------------------------------------------------
# Monte Carlo decoding simulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimConfig:
    """Configuration of one random-coding decoding experiment."""

    n: int
    m: int
    tau: float
    kernel_u: float
    eps_rx: float
    eps_dx: float
    trials: int
    codebooks: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n!r}")
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m!r}")
        if self.n < 64 and self.m > 2**self.n:
            raise ValueError(f"infeasible codebook: m={self.m} > 2^n")
        if self.trials < 1 or self.codebooks < 1:
            raise ValueError("trials and codebooks must be >= 1")
        for name in ("tau", "kernel_u", "eps_rx", "eps_dx"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimResult:
    """Outcome of a decoding experiment plus the analytic references."""

    decode_error_estimate: float
    confidence_half_width: float
    detection: DetectionResult
    gallager_bound: float
    rho_used: float
    seed: int
    rng_algorithm: str = RNG_ALGORITHM


def _codebook_rng(seed: int, stream: int) -> np.random.Generator:
    # streams are keyed by (seed, index): parallel and serial runs agree
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, stream], dtype=np.uint64))
    )


def gallager_decoding_bound(
    n: int, m: int, input_dist, ch, tol: float = 1e-9
) -> tuple[float, float]:
    """Ensemble-average decoding-error bound exp(rho*ln M - n*E0(rho)),
    minimised over rho in [0, 1].  Returns (bound, minimising rho)."""
    log_m = math.log(m)

    def negated(rho: float) -> float:
        return n * e0_discrete(rho, input_dist, ch) - rho * log_m

    rho_opt, best = bd._golden_max(negated, 0.0, 1.0, tol)
    return math.exp(-best), rho_opt


def simulate_decoding(cfg: SimConfig) -> SimResult:
    """Ensemble-average maximum-likelihood decoding error over random sparse
    codebooks on a BSC, with the analytic references evaluated at the same
    operating point.

    Codeword symbols are i.i.d. Bernoulli(tau * kernel_u).  ML decoding is
    minimum Hamming distance for eps_rx < 1/2 (maximum for eps_rx > 1/2);
    ties resolve to the lowest codeword index.  The confidence half-width
    is a 95% normal approximation over per-codebook error rates (the
    codebooks, not the trials, are the independent units).
    """
    p_one = cfg.tau * cfg.kernel_u
    total_errors = 0
    per_codebook = np.empty(cfg.codebooks)
    for b in range(cfg.codebooks):
        rng = _codebook_rng(cfg.seed, b)
        codebook = rng.random((cfg.m, cfg.n)) < p_one
        messages = rng.integers(0, cfg.m, size=cfg.trials)
        noise = rng.random((cfg.trials, cfg.n)) < cfg.eps_rx
        received = codebook[messages] ^ noise

        cw = codebook.astype(np.float64)
        cw_weight = cw.sum(axis=1)
        rec_weight = received.sum(axis=1).astype(np.float64)
        cross = received.astype(np.float64) @ cw.T
        dist = rec_weight[:, None] + cw_weight[None, :] - 2.0 * cross
        if cfg.eps_rx < 0.5:
            decoded = dist.argmin(axis=1)
        elif cfg.eps_rx > 0.5:
            decoded = dist.argmax(axis=1)
        else:
            decoded = np.zeros(cfg.trials, dtype=np.int64)

        errors = int((decoded != messages).sum())
        total_errors += errors
        per_codebook[b] = errors / cfg.trials

    estimate = total_errors / (cfg.codebooks * cfg.trials)
    if cfg.codebooks >= 2:
        half_width = 1.96 * per_codebook.std(ddof=1) / math.sqrt(cfg.codebooks)
    else:
        half_width = 1.96 * math.sqrt(max(estimate * (1.0 - estimate), 0.0) / cfg.trials)

    bound, rho_opt = gallager_decoding_bound(
        cfg.n, cfg.m, [1.0 - p_one, p_one], make_bsc(cfg.eps_rx)
    )
    detection = detection_error_sum_exact(cfg.n, p_one, cfg.eps_dx)
    return SimResult(
        decode_error_estimate=estimate,
        confidence_half_width=half_width,
        detection=detection,
        gallager_bound=bound,
        rho_used=rho_opt,
        seed=cfg.seed,
    )


def codebook_detection_mc(cfg: SimConfig) -> tuple[float, float, float]:
    """Detection error sum when the transmitted word comes from a fixed
    random codebook instead of the i.i.d. marginal.

    Returns (mc_error_sum, half_width, iid_error_sum).  The i.i.d. value is
    the modelling assumption of the detection analysis; the gap is reported,
    not asserted (no guarantee holds for an individual codebook).
    """
    p_one = cfg.tau * cfg.kernel_u
    q1 = (1.0 - p_one) * cfg.eps_dx + p_one * (1.0 - cfg.eps_dx)
    pmf0 = _binomial_pmf(cfg.n, cfg.eps_dx)
    pmf1 = _binomial_pmf(cfg.n, q1)
    decide_h1 = pmf1 > pmf0
    alpha = float(pmf0[decide_h1].sum())

    per_codebook = np.empty(cfg.codebooks)
    for b in range(cfg.codebooks):
        rng = _codebook_rng(cfg.seed, (1 << 32) + b)
        codebook = rng.random((cfg.m, cfg.n)) < p_one
        messages = rng.integers(0, cfg.m, size=cfg.trials)
        noise = rng.random((cfg.trials, cfg.n)) < cfg.eps_dx
        observed = codebook[messages] ^ noise
        counts = observed.sum(axis=1)
        missed = ~decide_h1[counts]
        per_codebook[b] = alpha + missed.mean()

    mc_error_sum = float(per_codebook.mean())
    if cfg.codebooks >= 2:
        half_width = 1.96 * per_codebook.std(ddof=1) / math.sqrt(cfg.codebooks)
    else:
        half_width = float("nan")
    iid = detection_error_sum_exact(cfg.n, p_one, cfg.eps_dx).error_sum
    return mc_error_sum, half_width, iid


# ---------------------------------------------------------------------------
# quadrature oracles for the AWGN closed forms (verification only, not a
# runtime path of the bound engine)
# ---------------------------------------------------------------------------

_HERMGAUSS_NODES, _HERMGAUSS_WEIGHTS = np.polynomial.hermite.hermgauss(96)


def e0_awgn_quadrature(rho: float, power: float, sigma2_rx: float) -> float:
    """E0 for a Gaussian kernel on an AWGN channel from its defining double
    integral: Gauss-Hermite in the kernel variable, adaptive quadrature in
    the output variable."""
    s = 1.0 / (1.0 + rho)
    const = (2.0 * math.pi * sigma2_rx) ** (-s / 2.0)
    x = math.sqrt(2.0 * power) * _HERMGAUSS_NODES
    w = _HERMGAUSS_WEIGHTS / math.sqrt(math.pi)

    def outer(y: float) -> float:
        inner = float((w * const * np.exp(-s * (y - x) ** 2 / (2.0 * sigma2_rx))).sum())
        return inner ** (1.0 + rho)

    val, _ = quad(outer, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12, limit=300)
    return -math.log(val)


def chi2_awgn_quadrature(power: float, sigma2_dx: float) -> float:
    """Chi-squared divergence of the Gaussian-kernel detector marginal from
    the pure-noise law, from its defining integral (log-space integrand)."""
    v = power + sigma2_dx

    def integrand(w: float) -> float:
        log_pv = -w * w / (2.0 * v) - 0.5 * math.log(2.0 * math.pi * v)
        log_p0 = -w * w / (2.0 * sigma2_dx) - 0.5 * math.log(2.0 * math.pi * sigma2_dx)
        return math.exp(2.0 * log_pv - log_p0) * (1.0 - math.exp(log_p0 - log_pv)) ** 2

    val, _ = quad(integrand, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12, limit=300)
    return val


# ---------------------------------------------------------------------------
# oracle battery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleCheck:
    """One verified inequality or agreement, with its observed margin."""

    name: str
    passed: bool
    margin: float
    detail: str = ""


@dataclass(frozen=True)
class OracleReport:
    """Outcome of the oracle battery."""

    checks: list[OracleCheck]
    seed: int
    scope: str
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "scope": self.scope,
            "rng_algorithm": self.rng_algorithm,
            "all_passed": self.all_passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "margin": c.margin,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }

    def format_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            detail = f"  [{c.detail}]" if c.detail else ""
            lines.append(f"{status}  {c.name}  (margin={c.margin:.3e}){detail}")
        verdict = "all checks passed" if self.all_passed else "FAILURES PRESENT"
        lines.append(f"-- {len(self.checks)} checks, {verdict} --")
        return "\n".join(lines)


_Check = tuple[bool, float, str]


def _chk_lambert_roundtrip() -> _Check:
    xs = np.concatenate(
        [
            np.linspace(-math.exp(-1.0) + 1e-12, 0.5, 60),
            np.geomspace(0.5, 10.0, 40),
        ]
    )
    worst = 0.0
    for x in xs:
        back = lambert_w0_inv(lambert_w0(float(x)))
        worst = max(worst, abs(back - x) / max(abs(x), 1e-12))
    return worst <= 1e-10, 1e-10 - worst, f"max rel roundtrip err {worst:.2e}"


def _chk_lambert_residual() -> _Check:
    xs = np.concatenate([np.linspace(-0.36, 0.3, 40), np.geomspace(0.3, 1e6, 40)])
    worst = 0.0
    for x in xs:
        w = lambert_w0(float(x))
        worst = max(worst, abs(w * math.exp(w) - x) / max(1.0, abs(x)))
    return worst <= 1e-12, 1e-12 - worst, f"max residual {worst:.2e}"


def _chk_lambert_monotone() -> _Check:
    xs = np.linspace(-math.exp(-1.0) + 1e-10, 8.0, 200)
    ws = np.array([lambert_w0(float(x)) for x in xs])
    min_gap = float(np.diff(ws).min())
    return min_gap > 0.0, min_gap, "strictly increasing on grid"


def _chk_xi_identity() -> _Check:
    worst = 0.0
    for eps in (1e-4, 1e-2, 0.05, 0.1, 0.3, 0.5, 0.9):
        z = 4.0 * eps * eps
        w = lambert_w0(z)
        worst = max(worst, abs(w * math.exp(w) - z) / max(z, 1e-300))
        xi = math.exp(-0.5 * w)
        worst = max(worst, abs(w + 2.0 * math.log(xi)))
    return worst <= 1e-12, 1e-12 - worst, "W0(4e^2)e^(W0) = 4e^2 and W0 = -2 ln xi"


def _chk_tensorised_tv_chain() -> _Check:
    # exact n-letter TV never exceeds (1/2) sqrt(W0_inv(n*chi2)) while the
    # bound is non-vacuous
    worst = float("inf")
    for n in (10, 100, 1000):
        for eps_dx in (0.2, 0.3, 0.4):
            for c in (0.3, 0.9):
                chi_k = chi2_bsc_kernel(1.0, eps_dx)
                tau_u = c / math.sqrt(n * chi_k)
                q1 = (1.0 - tau_u) * eps_dx + tau_u * (1.0 - eps_dx)
                chi_single = chi_squared([1.0 - q1, q1], [1.0 - eps_dx, eps_dx])
                bound = tv_product_upper_bound(n, chi_single)
                tv = exact_binomial_tv(n, eps_dx, q1)
                worst = min(worst, bound - tv)
    return worst >= -1e-12, worst, "exact product TV <= tensorised bound"


def _chk_covertness_end_to_end(budget: LpdBudget, perturb_xi: float) -> _Check:
    # with tau at the budget cap the whole chain must clear eps_det; the
    # perturb_xi knob inflates the cap to prove the check can fail
    worst_chain = float("inf")
    worst_sum = float("inf")
    for n in (100, 1000, 10_000):
        for eps_dx in (0.2, 0.3, 0.4):
            for u in (0.5, 1.0):
                chi_k = chi2_bsc_kernel(u, eps_dx)
                tau = min(
                    1.0,
                    perturb_xi
                    * 2.0
                    * budget.xi
                    * budget.eps_det
                    / math.sqrt(n * chi_k),
                )
                tau_u = tau * u
                q1 = (1.0 - tau_u) * eps_dx + tau_u * (1.0 - eps_dx)
                chi_single = chi_squared([1.0 - q1, q1], [1.0 - eps_dx, eps_dx])
                chain = tv_product_upper_bound(n, chi_single)
                tv = exact_binomial_tv(n, eps_dx, q1)
                res = detection_error_sum_exact(n, tau_u, eps_dx)
                worst_chain = min(worst_chain, budget.eps_det * (1.0 + 1e-9) - chain)
                worst_chain = min(worst_chain, chain - tv)
                worst_sum = min(worst_sum, res.error_sum - (1.0 - budget.eps_det))
    ok = worst_chain >= -1e-12 and worst_sum >= 0.0
    return ok, min(worst_chain, worst_sum), f"min error-sum margin {worst_sum:.4f}"


def _chk_pinsker(rng: np.random.Generator) -> _Check:
    worst = float("inf")
    for _ in range(50):
        k = int(rng.integers(2, 8))
        p = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k))
        worst = min(
            worst, math.sqrt(kl_divergence(p, q) / 2.0) - total_variation(p, q)
        )
    return worst >= -1e-12, worst, "TV <= sqrt(KL/2) on random pairs"


def _chk_chi2_mixture_scaling(rng: np.random.Generator) -> _Check:
    worst = 0.0
    for _ in range(50):
        k = int(rng.integers(2, 8))
        kernel = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k)) + 0.05
        q /= q.sum()
        tau = float(rng.uniform(0.0, 1.0))
        mix = (1.0 - tau) * q + tau * kernel
        lhs = chi_squared(mix, q)
        rhs = tau * tau * chi_squared(kernel, q)
        worst = max(worst, abs(lhs - rhs) / max(1.0, rhs))
    return worst <= 1e-12, 1e-12 - worst, "chi2((1-t)q + t k || q) = t^2 chi2(k||q)"


def _chk_sparse_exponent_bounds() -> _Check:
    ch = make_bsc(0.1)
    worst = float("inf")
    worst_collapse = 0.0
    for rho in np.linspace(0.0, 1.0, 6):
        for u in np.linspace(0.05, 1.0, 6):
            e0_kernel = e0_bsc(float(rho), float(u), 0.1)
            for tau in np.linspace(0.0, 1.0, 6):
                full = [1.0 - tau * u, tau * u]
                e0_full = e0_discrete(float(rho), full, ch)
                lb_log, lb_lin = e0_sparse_lower_bounds(float(rho), float(tau), e0_kernel)
                worst = min(worst, e0_full - lb_log, lb_log - lb_lin)
            lb_log_1, _ = e0_sparse_lower_bounds(float(rho), 1.0, e0_kernel)
            worst_collapse = max(worst_collapse, abs(lb_log_1 - e0_kernel))
    ok = worst >= -1e-12 and worst_collapse <= 1e-12
    return ok, worst, f"tau=1 collapse max err {worst_collapse:.2e}"


def _chk_e0_slope_equals_mi(rng: np.random.Generator) -> _Check:
    worst = 0.0
    h = 1e-5
    for _ in range(20):
        eps = float(rng.uniform(0.01, 0.4))
        p1 = float(rng.uniform(0.05, 0.95))
        ch = make_bsc(eps)
        dist = [1.0 - p1, p1]
        slope = e0_discrete(h, dist, ch) / h
        mi = mutual_information(dist, ch)
        worst = max(worst, abs(slope - mi) / mi)
    return worst <= 1e-3, 1e-3 - worst, f"max rel FD-slope error {worst:.2e}"


def _chk_e0_monotone_concave(rng: np.random.Generator) -> _Check:
    rhos = np.linspace(0.0, 1.0, 21)
    worst_mono = float("inf")
    worst_concave = float("inf")
    for _ in range(5):
        eps = float(rng.uniform(0.02, 0.45))
        p1 = float(rng.uniform(0.05, 0.95))
        ch = make_bsc(eps)
        vals = np.array([e0_discrete(float(r), [1.0 - p1, p1], ch) for r in rhos])
        d1 = np.diff(vals)
        d2 = np.diff(vals, 2)
        worst_mono = min(worst_mono, float(d1.min()))
        worst_concave = min(worst_concave, float((-d2).min()))
    ok = worst_mono >= -1e-12 and worst_concave >= -1e-10
    return ok, min(worst_mono, worst_concave + 1e-10), "E0 nondecreasing, concave in rho"


def _chk_e0_bsc_agreement() -> _Check:
    worst = 0.0
    for rho in np.linspace(0.0, 1.0, 20):
        for u, eps in ((0.1, 0.05), (0.3, 0.2), (0.7, 0.4), (1.0, 0.1)):
            a = e0_bsc(float(rho), u, eps)
            b = e0_discrete(float(rho), [1.0 - u, u], make_bsc(eps))
            worst = max(worst, abs(a - b))
    return worst <= 1e-12, 1e-12 - worst, "closed form vs generic E0"


def _chk_awgn_quadrature() -> _Check:
    worst = 0.0
    for frac in (0.1, 0.5, 0.9):
        for rho in (0.25, 1.0):
            a = e0_awgn_quadrature(rho, frac, 1.0)
            b = e0_awgn_gaussian(rho, frac, 1.0)
            worst = max(worst, abs(a - b))
        worst = max(worst, abs(chi2_awgn_quadrature(frac, 1.0) - chi2_awgn_gaussian(frac, 1.0)))
    return worst <= 1e-6, 1e-6 - worst, f"max |quadrature - closed form| {worst:.2e}"


def _chk_bsc_limit_agreement(budget: LpdBudget) -> _Check:
    u = 1e-6
    worst = 0.0
    for rho in np.linspace(0.1, 1.0, 10):
        for eps_rx in (0.05, 0.1, 0.2):
            for eps_dx in (0.2, 0.3, 0.4):
                generic = bd.l_factor(
                    float(rho),
                    e0_bsc(float(rho), u, eps_rx),
                    chi2_bsc_kernel(u, eps_dx),
                    budget,
                )
                closed = bd.l_bsc(float(rho), eps_rx, eps_dx, budget)
                worst = max(worst, abs(generic - closed) / closed)
    # monotone: generic pipeline L is nonincreasing in the kernel mass
    worst_mono = float("inf")
    for rho in (0.3, 1.0):
        prev = None
        for uu in np.geomspace(1e-6, 1.0, 12):
            val = bd.l_factor(
                float(rho),
                e0_bsc(float(rho), float(uu), 0.1),
                chi2_bsc_kernel(float(uu), 0.3),
                budget,
            )
            if prev is not None:
                worst_mono = min(worst_mono, prev - val)
            prev = val
    ok = worst <= 1e-4 and worst_mono >= -1e-12
    return ok, 1e-4 - worst, f"max rel gap at u=1e-6: {worst:.2e}"


def _chk_awgn_limit_agreement(budget: LpdBudget) -> _Check:
    worst = 0.0
    worst_mono = float("inf")
    for sigma2_dx in (0.5, 1.0, 2.0):
        p = 1e-8 * sigma2_dx
        for rho in np.linspace(0.1, 1.0, 10):
            generic = bd.l_factor(
                float(rho),
                e0_awgn_gaussian(float(rho), p, 1.0),
                chi2_awgn_gaussian(p, sigma2_dx),
                budget,
            )
            closed = (
                math.sqrt(2.0) * budget.xi * sigma2_dx / ((1.0 + rho) * _LN2)
            )
            worst = max(worst, abs(generic - closed) / closed)
    for rho in (0.25, 1.0):
        prev = None
        for p in np.geomspace(1e-6, 0.999, 12):
            val = bd.l_factor(
                float(rho),
                e0_awgn_gaussian(float(rho), float(p), 1.0),
                chi2_awgn_gaussian(float(p), 1.0),
                budget,
            )
            if prev is not None:
                worst_mono = min(worst_mono, prev - val)
            prev = val
    ok = worst <= 1e-4 and worst_mono >= -1e-12
    return ok, 1e-4 - worst, f"max rel gap at P=1e-8*s2: {worst:.2e}"


def _chk_asymptote_consistency(budget: LpdBudget) -> _Check:
    # L(rho -> 0) limit vs the closed coefficient, generic and BSC routes
    u, eps_rx, eps_dx = 0.5, 0.1, 0.3
    ch = make_bsc(eps_rx)
    mi = mutual_information([1.0 - u, u], ch)
    chi_k = chi2_bsc_kernel(u, eps_dx)
    coeff = bd.asymptotic_coefficient(mi, chi_k, budget)
    near = bd.l_factor(1e-4, e0_bsc(1e-4, u, eps_rx), chi_k, budget)
    rel_limit = abs(near - coeff) / coeff

    mi_rate = (1.0 - 2.0 * eps_rx) * math.log((1.0 - eps_rx) / eps_rx)
    coeff0 = bd.asymptotic_coefficient(mi_rate, chi2_bsc_kernel(1.0, eps_dx), budget)
    asym = bd.bsc_asymptote(eps_rx, eps_dx, budget)
    rel_paths = abs(coeff0 * budget.eps_det - asym) / asym

    near_asym = bd.l_bsc(1e-5, eps_rx, eps_dx, budget) * budget.eps_det
    rel_lb = abs(near_asym - asym) / asym
    ok = rel_limit <= 1e-3 and rel_paths <= 1e-9 and rel_lb <= 1e-3
    return ok, 1e-3 - max(rel_limit, rel_lb), f"two-path identity gap {rel_paths:.2e}"


def _chk_awgn_operating_identities(budget: LpdBudget) -> _Check:
    worst = 0.0
    k_expected = math.log2(1.0 / budget.eps_dec)
    for ratio in (0.5, 1.0, 2.0):
        op = bd.awgn_operating_point(1.0, ratio, budget)
        worst = max(worst, abs(op.n_star / op.n_min - 16.0))
        worst = max(worst, abs(bd.awgn_rho_star(op.n_star, op.n_min) - 1.0))
        worst = max(worst, abs(op.k_star - k_expected))
        worst = max(worst, abs(op.n_star * op.r_star - op.k_star) / op.k_star)
    return worst <= 1e-9, 1e-9 - worst, "n*/n_min=16, rho*(n*)=1, k*=log2(1/eps_dec)"


def _brute_force_awgn(budget: LpdBudget, sigma2_dx: float):
    op = bd.awgn_operating_point(1.0, sigma2_dx, budget)
    n_grid = np.geomspace(op.n_star / 4.0, op.n_star * 4.0, 1200)
    rho_grid = np.linspace(1e-3, 1.0, 800)
    amp = math.sqrt(2.0) * budget.eps_det * budget.xi * sigma2_dx / _LN2
    log2m = amp * np.sqrt(n_grid)[:, None] / (1.0 + rho_grid)[None, :] + math.log2(
        budget.eps_dec
    ) / rho_grid[None, :]
    rate = log2m / n_grid[:, None]
    i, j = np.unravel_index(int(rate.argmax()), rate.shape)
    return op, float(n_grid[i]), float(rate[i, j])


def _chk_awgn_grid_recovery(budget: LpdBudget) -> _Check:
    worst = 0.0
    for ratio in (0.5, 1.0, 2.0):
        op, n_hat, r_hat = _brute_force_awgn(budget, ratio)
        worst = max(worst, abs(n_hat - op.n_star) / op.n_star)
        worst = max(worst, abs(r_hat - op.r_star) / op.r_star)
    return worst <= 0.005, 0.005 - worst, f"max rel 2-D grid deviation {worst:.2e}"


def _chk_bsc_grid_recovery(budget: LpdBudget) -> _Check:
    eps_rx, eps_dx = 0.1, 0.3
    op = bd.bsc_operating_point(eps_rx, eps_dx, budget)
    rho_grid = np.linspace(1e-3, 1.0, 600)
    l_vals = np.array([bd.l_bsc(float(r), eps_rx, eps_dx, budget) for r in rho_grid])
    n_grid = np.geomspace(op.n_star / 4.0, op.n_star * 4.0, 1200)
    log2m = budget.eps_det * np.sqrt(n_grid)[:, None] * l_vals[None, :] + math.log2(
        budget.eps_dec
    ) / rho_grid[None, :]
    rate = log2m / n_grid[:, None]
    i, _ = np.unravel_index(int(rate.argmax()), rate.shape)
    n_hat, r_hat = float(n_grid[i]), float(rate.max())
    worst = max(abs(n_hat - op.n_star) / op.n_star, abs(r_hat - op.r_star) / op.r_star)
    return worst <= 0.005, 0.005 - worst, f"max rel 2-D grid deviation {worst:.2e}"


def _chk_rho_clamp_brute_force(budget: LpdBudget) -> _Check:
    n_min = bd.awgn_n_min(1.0, 1.0, budget)
    rho_grid = np.geomspace(bd.RHO_FLOOR, 1.0, 10_000)
    worst = 0.0
    for mult in (2.0, 8.0, 12.0, 32.0):
        n = mult * n_min
        engine = bd.awgn_bound(n, bd.awgn_rho_star(n, n_min), 1.0, 1.0, budget)
        brute = max(bd.awgn_bound(n, float(r), 1.0, 1.0, budget) for r in rho_grid)
        worst = max(worst, abs(engine - brute) / max(abs(brute), 1e-12))
    return worst <= 1e-3, 1e-3 - worst, "clamped rho* matches rho grid search"


def _chk_blocklength_at_zero_rate(budget: LpdBudget) -> _Check:
    # at n_min the bound's supremum over unconstrained rho is exactly zero;
    # with rho capped at 1 positivity starts at 4*n_min
    n_min = bd.awgn_n_min(1.0, 1.0, budget)
    amp = math.sqrt(2.0 * n_min) * budget.eps_det * budget.xi / _LN2

    def unconstrained(rho: float) -> float:
        return amp / (1.0 + rho) + math.log2(budget.eps_dec) / rho

    sup = max(unconstrained(float(r)) for r in np.geomspace(1e-6, 1e5, 4000))
    capped = bd.awgn_bound(n_min, 1.0, 1.0, 1.0, budget)
    below = bd.awgn_bound(3.999 * n_min, 1.0, 1.0, 1.0, budget)
    above = bd.awgn_bound(4.001 * n_min, 1.0, 1.0, 1.0, budget)
    ok = abs(sup) < 1e-6 and capped < 0.0 and below < 0.0 < above
    return ok, 1e-6 - abs(sup), "sup over rho at n_min is 0; positive from 4*n_min"


def _chk_srl_rate_shape(budget: LpdBudget) -> _Check:
    eps_rx, eps_dx = 0.1, 0.3
    n_grid = np.geomspace(1e2, 1e8, 49)
    rates = np.array(
        [bd.bsc_bound_point(float(n), eps_rx, eps_dx, budget).rate for n in n_grid]
    )
    peak = int(rates.argmax())
    interior = 0 < peak < len(n_grid) - 1
    positive = rates > 0.0
    d = np.diff(rates)
    rising = bool(np.all(d[: peak][positive[:peak]] > 0.0))
    falling = bool(np.all(d[peak:] < 0.0))

    asym = bd.bsc_asymptote(eps_rx, eps_dx, budget)
    ratios = rates * np.sqrt(n_grid) / asym
    below = bool(np.all(ratios <= 1.0 + 1e-12))
    approach = bool(np.all(np.diff(ratios[peak:]) > 0.0))
    ok = interior and rising and falling and below and approach
    return ok, float(ratios[-1]), f"rate*sqrt(n)/asymptote at n=1e8: {ratios[-1]:.3f}"


def _chk_detection_monotone_in_n() -> _Check:
    worst = float("inf")
    prev = None
    for n in (10, 30, 100, 300, 1000, 3000):
        v = detection_error_sum_exact(n, 0.01, 0.3).error_sum
        if prev is not None:
            worst = min(worst, prev - v)
        prev = v
    return worst >= -1e-12, worst, "error sum nonincreasing in n"


def _chk_binomial_tv_consistency() -> _Check:
    worst = 0.0
    worst_rel = 0.0
    worst_rel = max(worst_rel, abs(exact_binomial_tv(1, 0.2, 0.26) - 0.06))
    for n, tau_u, eps_dx in ((1, 0.1, 0.2), (50, 0.05, 0.3), (400, 0.01, 0.4)):
        q1 = (1.0 - tau_u) * eps_dx + tau_u * (1.0 - eps_dx)
        res = detection_error_sum_exact(n, tau_u, eps_dx)
        tv = exact_binomial_tv(n, eps_dx, q1)
        worst = max(worst, abs(res.error_sum - (1.0 - tv)))
    return (
        worst <= 1e-12 and worst_rel <= 1e-12,
        1e-12 - worst,
        "error sum = 1 - exact TV",
    )


def _chk_mc_decoding(budget: LpdBudget, seed: int) -> _Check:
    n = 256
    tau = tau_max(n, budget, chi2_bsc_kernel(1.0, 0.3))
    cfg = SimConfig(
        n=n,
        m=256,
        tau=tau,
        kernel_u=1.0,
        eps_rx=0.1,
        eps_dx=0.3,
        trials=500,
        codebooks=200,
        seed=seed,
    )
    res = simulate_decoding(cfg)
    margin = (
        res.gallager_bound
        + 3.0 * res.confidence_half_width
        - res.decode_error_estimate
    )
    detail = (
        f"est {res.decode_error_estimate:.4f} <= bound {res.gallager_bound:.4f}"
        f" + 3*{res.confidence_half_width:.4f}"
    )
    return margin >= 0.0, margin, detail


def _chk_codebook_detection_gap(budget: LpdBudget, seed: int) -> _Check:
    n = 200
    tau = tau_max(n, budget, chi2_bsc_kernel(1.0, 0.3))
    cfg = SimConfig(
        n=n,
        m=256,
        tau=tau,
        kernel_u=1.0,
        eps_rx=0.1,
        eps_dx=0.3,
        trials=2000,
        codebooks=64,
        seed=seed,
    )
    mc, hw, iid = codebook_detection_mc(cfg)
    gap = abs(mc - iid)
    detail = f"codebook-induced {mc:.5f} vs i.i.d. {iid:.5f} (3hw={3*hw:.5f}); reported, not asserted"
    return True, 3.0 * hw - gap, detail


def run_oracle_battery(
    seed: int = DEFAULT_SEED, scope: str = "fast", perturb_xi: float = 1.0
) -> OracleReport:
    """Run every cross-check backing the engine and report margins.

    scope "fast" runs the analytic battery; "full" adds the Monte Carlo
    decoding experiment and the codebook-induced detection comparison.
    perturb_xi is a harness self-test knob: it scales the xi factor used in
    the end-to-end covertness check, so any value above 1 must make that
    check fail (proving the battery can detect a corrupted budget).
    """
    if scope not in ("fast", "full"):
        raise ValueError(f"scope must be 'fast' or 'full', got {scope!r}")
    budget = LpdBudget(eps_det=0.1, eps_dec=1e-3)
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))

    plan: list[tuple[str, Callable[[], _Check]]] = [
        ("lambert_w_roundtrip", _chk_lambert_roundtrip),
        ("lambert_w_residual", _chk_lambert_residual),
        ("lambert_w_monotone", _chk_lambert_monotone),
        ("xi_identity", _chk_xi_identity),
        ("tensorised_tv_chain", _chk_tensorised_tv_chain),
        (
            "covertness_end_to_end",
            lambda: _chk_covertness_end_to_end(budget, perturb_xi),
        ),
        ("pinsker_sanity", lambda: _chk_pinsker(rng)),
        ("chi2_mixture_scaling", lambda: _chk_chi2_mixture_scaling(rng)),
        ("sparse_exponent_bounds", _chk_sparse_exponent_bounds),
        ("e0_slope_equals_mi", lambda: _chk_e0_slope_equals_mi(rng)),
        ("e0_monotone_concave", lambda: _chk_e0_monotone_concave(rng)),
        ("e0_bsc_closed_form", _chk_e0_bsc_agreement),
        ("awgn_quadrature", _chk_awgn_quadrature),
        ("bsc_small_u_limit", lambda: _chk_bsc_limit_agreement(budget)),
        ("awgn_small_power_limit", lambda: _chk_awgn_limit_agreement(budget)),
        ("asymptote_consistency", lambda: _chk_asymptote_consistency(budget)),
        ("awgn_operating_identities", lambda: _chk_awgn_operating_identities(budget)),
        ("awgn_grid_recovery", lambda: _chk_awgn_grid_recovery(budget)),
        ("bsc_grid_recovery", lambda: _chk_bsc_grid_recovery(budget)),
        ("rho_clamp_vs_grid", lambda: _chk_rho_clamp_brute_force(budget)),
        ("zero_rate_blocklength", lambda: _chk_blocklength_at_zero_rate(budget)),
        ("srl_rate_shape", lambda: _chk_srl_rate_shape(budget)),
        ("detection_monotone_in_n", _chk_detection_monotone_in_n),
        ("binomial_tv_consistency", _chk_binomial_tv_consistency),
    ]
    if scope == "full":
        plan.append(("mc_decoding_vs_ensemble_bound", lambda: _chk_mc_decoding(budget, seed)))
        plan.append(
            ("codebook_detection_gap", lambda: _chk_codebook_detection_gap(budget, seed))
        )

    checks = []
    for name, fn in plan:
        try:
            passed, margin, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, margin, detail = False, float("-inf"), f"raised {exc!r}"
        checks.append(
            OracleCheck(
                name=name, passed=bool(passed), margin=float(margin), detail=str(detail)
            )
        )
    return OracleReport(checks=checks, seed=seed, scope=scope)
