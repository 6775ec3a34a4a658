"""Channel models and sparse signalling inputs.

Discrete channels are row-stochastic transition matrices with a designated
innocent input (the symbol sent when no communication takes place).  The
AWGN channel is represented parametrically; its exponent and chi-squared
divergence use closed forms (see `gallager`), so no densities are stored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SUM_TOL = 1e-12


def _as_probability_vector(v, name: str, tol: float = _SUM_TOL) -> np.ndarray:
    p = np.asarray(v, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"{name} must be a 1-D probability vector")
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError(f"{name} entries must lie in [0, 1]")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"{name} must sum to 1 within {tol:g}, got {p.sum()!r}")
    return p


@dataclass(frozen=True)
class DiscreteChannel:
    """Finite-alphabet memoryless channel p(y|x) with an innocent input.

    Rows of `transition` index inputs, columns index outputs.  Instances
    are immutable (the matrix is copied and frozen), so they can be shared
    freely across threads.
    """

    transition: np.ndarray
    innocent_input: int = 0

    def __post_init__(self):
        t = np.array(self.transition, dtype=float)
        if t.ndim != 2 or t.shape[0] < 2 or t.shape[1] < 2:
            raise ValueError("transition must be a matrix with >= 2 inputs and outputs")
        if np.any(t < 0.0) or np.any(t > 1.0):
            raise ValueError("transition entries must lie in [0, 1]")
        row_err = np.max(np.abs(t.sum(axis=1) - 1.0))
        if row_err > _SUM_TOL:
            raise ValueError(f"transition rows must sum to 1 within {_SUM_TOL:g}")
        if not 0 <= self.innocent_input < t.shape[0]:
            raise ValueError(f"innocent_input {self.innocent_input} out of range")
        t.setflags(write=False)
        object.__setattr__(self, "transition", t)

    @property
    def num_inputs(self) -> int:
        return self.transition.shape[0]

    @property
    def num_outputs(self) -> int:
        return self.transition.shape[1]

    @property
    def innocent_row(self) -> np.ndarray:
        """Output distribution when the innocent symbol is sent."""
        return self.transition[self.innocent_input]


@dataclass(frozen=True)
class AwgnChannel:
    """Real AWGN channel, noise variance per use."""

    noise_variance: float

    def __post_init__(self):
        if not self.noise_variance > 0.0:
            raise ValueError(f"noise_variance must be > 0, got {self.noise_variance!r}")


@dataclass(frozen=True)
class SparseInput:
    """Sparse signalling density (1-tau)*delta(x - x0) + tau*kernel(x).

    tau is the probability of emitting a non-innocent symbol per channel
    use; the kernel is an arbitrary distribution over the input alphabet.
    """

    tau: float
    kernel: np.ndarray
    innocent_input: int = 0

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau!r}")
        k = _as_probability_vector(self.kernel, "kernel")
        if not 0 <= self.innocent_input < k.size:
            raise ValueError(f"innocent_input {self.innocent_input} out of range")
        k.setflags(write=False)
        object.__setattr__(self, "kernel", k)


@dataclass(frozen=True)
class BscKernel:
    """Binary-channel scenario: kernel mass u on symbol 1, crossover
    probabilities of the receiver and detector channels."""

    u: float
    eps_rx: float
    eps_dx: float

    def __post_init__(self):
        for name in ("u", "eps_rx", "eps_dx"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v!r}")


@dataclass(frozen=True)
class GaussKernel:
    """Gaussian kernel density with variance `power`.

    chi-squared of the induced detector marginal diverges unless
    power < sigma_dx^2; that is enforced where the divergence is evaluated.
    """

    power: float

    def __post_init__(self):
        if not self.power > 0.0:
            raise ValueError(f"power must be > 0, got {self.power!r}")


def make_bsc(eps: float, innocent_input: int = 0) -> DiscreteChannel:
    """Binary symmetric channel with crossover probability eps."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"crossover probability must be in [0, 1], got {eps!r}")
    t = np.array([[1.0 - eps, eps], [eps, 1.0 - eps]])
    return DiscreteChannel(t, innocent_input=innocent_input)


def output_marginal(ch: DiscreteChannel, input_dist) -> np.ndarray:
    """Output distribution induced by `input_dist` through the channel."""
    p = _as_probability_vector(input_dist, "input_dist", tol=1e-9)
    if p.size != ch.num_inputs:
        raise ValueError(
            f"input_dist has {p.size} entries, channel has {ch.num_inputs} inputs"
        )
    return p @ ch.transition


def sparse_full_distribution(s: SparseInput) -> np.ndarray:
    """Full input distribution of a sparse signalling density."""
    full = s.tau * np.array(s.kernel)
    full[s.innocent_input] += 1.0 - s.tau
    return full
