"""Special functions behind the covertness budget.

The detection constraint chain needs the principal branch of the Lambert W
function, its inverse z*exp(z), and the correction factor
xi = exp(-W0(4*eps_det^2)/2) that converts a total-variation budget into a
chi-squared budget.  W0 is solved by Halley iteration so the core has no
special-function dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_INV_E = math.exp(-1.0)
_MAX_ITERATIONS = 50
_RESIDUAL_TOL = 1e-14


def lambert_w0(x: float) -> float:
    """Principal-branch Lambert W: the w >= -1 solving w*exp(w) = x.

    Defined for x >= -1/e.  Halley iteration, seeded with x for small |x|,
    log(x) - log(log(x)) for x > e, and a branch-point series near -1/e;
    stops when |w*exp(w) - x| <= 1e-14 * |x| or after 50 steps.

    Raises
    ------
    ValueError
        For non-finite input or x < -1/e.
    """
    if not math.isfinite(x):
        raise ValueError(f"lambert_w0 requires finite input, got {x!r}")
    if x < -_INV_E:
        raise ValueError(f"lambert_w0 domain is [-1/e, inf), got {x!r}")
    if x == 0.0:
        return 0.0

    if x > math.e:
        lx = math.log(x)
        w = lx - math.log(lx)
    elif abs(x) < 0.3:
        w = x
    elif x < 0.0:
        # near the branch point: series in p = sqrt(2*(e*x + 1))
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p**3 / 72.0
    else:
        w = math.log1p(x)

    tol = _RESIDUAL_TOL * abs(x)
    for _ in range(_MAX_ITERATIONS):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol:
            break
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        w_next = w - f / denom
        if w_next == w:  # stalled at float resolution
            break
        w = w_next
    return max(w, -1.0)


def lambert_w0_inv(z: float) -> float:
    """Inverse of W0 on the principal branch: z*exp(z), defined for z >= -1."""
    if not math.isfinite(z):
        raise ValueError(f"lambert_w0_inv requires finite input, got {z!r}")
    if z < -1.0:
        raise ValueError(f"lambert_w0_inv domain is [-1, inf), got {z!r}")
    return z * math.exp(z)


def xi_factor(eps_det: float) -> float:
    """Detection-slack correction factor exp(-W0(4*eps_det^2)/2).

    Lies in (0, 1] and tends to 1 as eps_det -> 0; it tightens the
    chi-squared budget 4*xi^2*eps_det^2/n so that the tensorised
    total-variation bound stays below eps_det.
    """
    if not 0.0 < eps_det < 1.0:
        raise ValueError(f"eps_det must be in (0, 1), got {eps_det!r}")
    return math.exp(-0.5 * lambert_w0(4.0 * eps_det * eps_det))


@dataclass(frozen=True)
class LpdBudget:
    """Covertness and reliability targets for one operating scenario.

    eps_det bounds the shortfall of the adversary's detection error sum
    below 2 (alpha + beta >= 1 - eps_det); eps_dec is the tolerated average
    decoding error.  xi is derived from eps_det at construction.
    """

    eps_det: float
    eps_dec: float
    xi: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.eps_det < 1.0:
            raise ValueError(f"eps_det must be in (0, 1), got {self.eps_det!r}")
        if not 0.0 < self.eps_dec < 1.0:
            raise ValueError(f"eps_dec must be in (0, 1), got {self.eps_dec!r}")
        object.__setattr__(self, "xi", xi_factor(self.eps_det))
