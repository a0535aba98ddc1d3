"""Correlated source generation and binary-domain crossover estimation.

The side information is Y = X + E, where E is a three-branch Gaussian
mixture (pure Gaussian, Gaussian-Bernoulli-Gaussian, and Gaussian-Erasure
as special cases).  After quantization, each bit-plane behaves as its own
binary symmetric channel; the per-plane crossover probabilities are
estimated here by Monte Carlo.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .quantizer import QuantizerSpec, indices_to_bits, quantize


@dataclass(frozen=True)
class CorrelationModel:
    """Parameters of the additive error mixture.

    E ~ N(0, sigma_e_sq) w.p. q1, N(0, sigma_e_sq + sigma_i_sq) w.p. q2,
    and exactly 0 otherwise.
    """

    sigma_e_sq: float
    sigma_i_sq: float = 0.0
    q1: float = 0.0
    q2: float = 0.0

    def __post_init__(self):
        if self.sigma_e_sq < 0 or self.sigma_i_sq < 0:
            raise ValueError("variances must be nonnegative")
        if self.q1 < 0 or self.q2 < 0:
            raise ValueError("q1 and q2 must be nonnegative")
        if self.q1 + self.q2 > 1 + 1e-12:
            raise ValueError(f"q1+q2 > 1 (got {self.q1 + self.q2})")
        if self.q2 > 0 and self.sigma_i_sq < 10 * self.sigma_e_sq:
            warnings.warn("sigma_i_sq is expected to dominate sigma_e_sq",
                          stacklevel=2)

    @classmethod
    def gaussian(cls, sigma_e_sq: float) -> "CorrelationModel":
        """Pure Gaussian error: every sample is hit."""
        return cls(sigma_e_sq=sigma_e_sq, q1=1.0)

    @classmethod
    def gaussian_erasure(cls, sigma_e_sq: float, q1: float) -> "CorrelationModel":
        """Gaussian-Erasure: error occurs w.p. q1 < 1, otherwise Y = X."""
        if not 0 <= q1 < 1:
            raise ValueError("GE model requires q1 + q2 < 1 with q2 = 0")
        return cls(sigma_e_sq=sigma_e_sq, q1=q1)


@dataclass(frozen=True)
class BitplaneProfile:
    """Estimated crossover probability of each bit-plane BSC.

    per_plane[0] is the LSB plane (plane index 1); aggregate is the mean of
    the per-plane values, i.e. the single-BSC parameter.
    """

    per_plane: np.ndarray
    aggregate: float
    sample_count: int
    std_errors: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "per_plane", np.asarray(self.per_plane, dtype=np.float64))
        if self.std_errors is None:
            se = np.sqrt(self.per_plane * (1 - self.per_plane) / max(self.sample_count, 1))
            object.__setattr__(self, "std_errors", se)
        else:
            object.__setattr__(self, "std_errors", np.asarray(self.std_errors, dtype=np.float64))

    @property
    def bits(self) -> int:
        return self.per_plane.size

    @classmethod
    def flat(cls, p: float, bits: int, sample_count: int = 0) -> "BitplaneProfile":
        """Degenerate profile with the same p on every plane (single-BSC model)."""
        return cls(per_plane=np.full(bits, p), aggregate=p, sample_count=sample_count)

    def floored(self) -> "BitplaneProfile":
        """Copy with probabilities usable as LLR inputs.

        Exact zeros are floored at 1/(2*sample_count) to avoid infinite
        LLRs; values above 0.5 (possible under extreme noise) are clamped.
        """
        floor = 1.0 / (2 * self.sample_count) if self.sample_count > 0 else 1e-12
        pp = np.clip(self.per_plane, floor, 0.5)
        if np.any(self.per_plane > 0.5):
            warnings.warn("crossover estimate above 0.5 clamped for LLR use",
                          stacklevel=2)
        return BitplaneProfile(per_plane=pp,
                               aggregate=float(np.clip(self.aggregate, floor, 0.5)),
                               sample_count=self.sample_count,
                               std_errors=self.std_errors)


def sample_source(n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent draws from the standard normal source."""
    if n <= 0:
        raise ValueError("n must be positive")
    return rng.standard_normal(n)


def sample_error(model: CorrelationModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n error samples from the mixture of the correlation model."""
    u = rng.random(n)
    z = rng.standard_normal(n)
    sd = np.where(u < model.q1, np.sqrt(model.sigma_e_sq),
                  np.where(u < model.q1 + model.q2,
                           np.sqrt(model.sigma_e_sq + model.sigma_i_sq), 0.0))
    return z * sd


def apply_channel(x: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Y = X + E elementwise."""
    x = np.asarray(x)
    e = np.asarray(e)
    if x.shape != e.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {e.shape}")
    return x + e


def estimate_bitplane_crossovers(model: CorrelationModel, spec: QuantizerSpec,
                                 trials: int, rng: np.random.Generator) -> BitplaneProfile:
    """Monte Carlo estimate of the per-plane crossover probabilities.

    Draws (X, Y) pairs, quantizes both, and counts per-plane bit
    disagreements.  The aggregate is the mean of the per-plane values.
    """
    if trials < 10_000:
        warnings.warn(f"trials={trials} below 1e4; estimates will be noisy",
                      stacklevel=2)
    x = sample_source(trials, rng)
    y = apply_channel(x, sample_error(model, trials, rng))
    bx = indices_to_bits(spec, quantize(spec, x)).reshape(trials, spec.bits)
    by = indices_to_bits(spec, quantize(spec, y)).reshape(trials, spec.bits)
    neq = bx != by
    # flat mean over all bits; identical to the mean of the per-plane
    # values and bit-exact against a stream-based estimate of the same draws
    return BitplaneProfile(per_plane=np.mean(neq, axis=0),
                           aggregate=float(np.mean(neq)),
                           sample_count=trials)


def estimate_aggregate_crossover(x: np.ndarray, y: np.ndarray) -> float:
    """Crossover probability as the average Hamming weight of x XOR y."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size == 0:
        raise ValueError("empty sequences")
    return float(np.mean(x != y))
