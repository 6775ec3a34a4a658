"""Covert rate curves for AWGN channels.

The achievable covert rate depends on the channels only through the
detector-to-receiver noise power ratio.  Each curve has a minimum
blocklength below which no positive rate is achievable, a peak at
n* = 16 * n_min, and k* = log2(1/eps_dec) bits at the peak no matter the
noise ratio (a noisier detector just gets you there in fewer channel uses).

Run:  python demos/awgn_rate_curves.py
"""

import numpy as np

from covertcap import (
    LpdBudget,
    awgn_asymptote,
    awgn_bound_point,
    awgn_operating_point,
)

budget = LpdBudget(eps_det=0.1, eps_dec=1e-3)

print(f"detection slack {budget.eps_det}, decoding target {budget.eps_dec}\n")

for ratio in (0.5, 1.0, 2.0):
    op = awgn_operating_point(1.0, ratio, budget)
    asym = awgn_asymptote(1.0, ratio, budget)
    print(f"--- noise power ratio sigma2_dx / sigma2_rx = {ratio} ---")
    print(f"n_min = {op.n_min:.1f}   n* = {op.n_star:.1f}   "
          f"n*/n_min = {op.n_star / op.n_min:.1f}")
    print(f"R(n*) = {op.r_star:.6g} bits/use   k* = {op.k_star:.5f} bits   "
          f"rho*(n*) = {op.rho_used:.1f}")
    print(f"{'n':>12} {'rho*':>8} {'log2 M':>12} {'rate':>12} {'asym rate':>12}")
    for n in np.geomspace(op.n_min / 4, op.n_min * 4096, 8):
        pt = awgn_bound_point(float(n), 1.0, ratio, budget)
        print(f"{n:12.3g} {pt.rho:8.4f} {pt.log2_m:12.4f} {pt.rate:12.5e} "
              f"{asym / np.sqrt(n):12.5e}")
    print()

print("k* is invariant: halving the detector's noise advantage quadruples n*")
for ratio in (0.5, 1.0, 2.0, 4.0):
    op = awgn_operating_point(1.0, ratio, budget)
    print(f"  ratio {ratio:>4}: n* = {op.n_star:12.1f}   k* = {op.k_star:.5f} bits")
