"""Finite-blocklength achievability bounds for covert communication.

Computes, optimises and independently verifies how many bits can be sent
reliably over BSC and AWGN channels while an adversary's optimal detector
stays close to blind guessing (the square-root law regime).
"""

from .bounds import (
    BoundPoint,
    OptimalOperating,
    RhoOptimum,
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
from .channels import (
    AwgnChannel,
    BscKernel,
    DiscreteChannel,
    GaussKernel,
    SparseInput,
    make_bsc,
    output_marginal,
    sparse_full_distribution,
)
from .divergence import (
    DetectionResult,
    DetectorBlindError,
    chi_squared,
    exact_binomial_tv,
    kl_divergence,
    tau_max,
    total_variation,
    tv_product_upper_bound,
)
from .gallager import (
    E0Value,
    chi2_awgn_gaussian,
    chi2_bsc_kernel,
    e0_awgn_gaussian,
    e0_bsc,
    e0_discrete,
    e0_sparse_lower_bounds,
    mutual_information,
)
from .specfn import LpdBudget, lambert_w0, lambert_w0_inv, xi_factor
from .verify import (
    OracleCheck,
    OracleReport,
    SimConfig,
    SimResult,
    codebook_detection_mc,
    detection_error_sum_exact,
    gallager_decoding_bound,
    run_oracle_battery,
    simulate_decoding,
)

__version__ = "0.1.0"
