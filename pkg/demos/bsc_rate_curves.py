"""Covert rate curves for binary symmetric channels.

Reproduces the classic picture: the achievable covert rate rises with the
blocklength until a peak, then decays like 1/sqrt(n) as the square-root law
takes over.  The noisier the adversary's channel (eps_dx closer to 1/2),
the more bits fit under the detection budget.

Run:  python demos/bsc_rate_curves.py
"""

import numpy as np

from covertcap import LpdBudget, bsc_asymptote, bsc_bound_point, bsc_operating_point

budget = LpdBudget(eps_det=0.1, eps_dec=1e-3)
eps_rx = 0.1
n_grid = np.geomspace(1e2, 1e8, 31)

print(f"detection slack {budget.eps_det}, decoding target {budget.eps_dec}, "
      f"xi = {budget.xi:.6f}")
print(f"receiver crossover eps_rx = {eps_rx}\n")

for eps_dx in (0.2, 0.3, 0.4):
    op = bsc_operating_point(eps_rx, eps_dx, budget)
    asym = bsc_asymptote(eps_rx, eps_dx, budget)
    print(f"--- detector crossover eps_dx = {eps_dx} ---")
    print(f"peak rate R(n*) = {op.r_star:.6g} bits/use at n* = {op.n_star:.0f} "
          f"(k* = {op.k_star:.4f} bits, rho* = {op.rho_used:.3f})")
    print(f"asymptotic slope: {asym:.4f} bits per sqrt(n)")
    print(f"{'n':>12} {'rho':>8} {'tau':>10} {'rate':>12} {'asym rate':>12}")
    for n in n_grid[::5]:
        pt = bsc_bound_point(float(n), eps_rx, eps_dx, budget)
        print(f"{n:12.3g} {pt.rho:8.4f} {pt.tau:10.3e} {pt.rate:12.5e} "
              f"{asym / np.sqrt(n):12.5e}")
    print()

print("note the slow approach of the finite-n rate to the asymptotic slope:")
op = bsc_operating_point(eps_rx, 0.3, budget)
asym = bsc_asymptote(eps_rx, 0.3, budget)
for mult in (1, 10, 100, 1000, 10000):
    n = mult * op.n_star
    pt = bsc_bound_point(n, eps_rx, 0.3, budget)
    frac = pt.rate * np.sqrt(n) / asym
    print(f"  n = {mult:>6}x n*: rate*sqrt(n) reaches {frac:6.1%} of the asymptote")
