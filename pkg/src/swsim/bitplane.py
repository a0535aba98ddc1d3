"""Bit-plane splitting/merging, crossover assignment, and interleaving.

Plane indices are 1-based externally (plane 1 = LSB); storage is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corr_channel import BitplaneProfile


def split_bitplanes(bits: np.ndarray, b: int) -> list:
    """Gather position k of every sample's b-tuple into plane k (LSB first)."""
    bits = np.asarray(bits)
    if bits.size % b != 0:
        raise ValueError(f"length {bits.size} not divisible by b={b}")
    planes = bits.reshape(-1, b).T
    return [np.ascontiguousarray(planes[k]) for k in range(b)]


def merge_bitplanes(planes: list) -> np.ndarray:
    """Inverse of split_bitplanes."""
    lengths = {np.asarray(p).size for p in planes}
    if len(lengths) != 1:
        raise ValueError(f"ragged plane lengths: {sorted(lengths)}")
    return np.stack([np.asarray(p) for p in planes]).T.reshape(-1)


def assign_crossovers(n: int, profile: BitplaneProfile, phase: int = 0) -> np.ndarray:
    """Cyclic per-position crossover assignment p_1, p_2, ..., p_b, p_1, ...

    Position i (1-based) gets the plane-((phase+i-1) mod b)+1 probability;
    a nonzero phase continues the pattern of a block that starts mid-sample.
    """
    b = profile.bits
    k = (phase + np.arange(n)) % b
    return profile.per_plane[k]


@dataclass(frozen=True)
class Interleaver:
    """Seeded permutation applied identically to data, side info, and p's."""

    permutation: np.ndarray
    seed: int

    def __post_init__(self):
        perm = np.asarray(self.permutation, dtype=np.int64)
        object.__setattr__(self, "permutation", perm)
        if not np.array_equal(np.sort(perm), np.arange(perm.size)):
            raise ValueError("permutation is not a bijection on [0, n)")
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        object.__setattr__(self, "_inverse", inv)

    @property
    def n(self) -> int:
        return self.permutation.size

    def interleave(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise ValueError(f"length mismatch: {v.shape} vs permutation {self.n}")
        return v[self.permutation]

    def deinterleave(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise ValueError(f"length mismatch: {v.shape} vs permutation {self.n}")
        return v[self._inverse]


def make_interleaver(n: int, seed: int, identity: bool = False) -> Interleaver:
    """Uniformly random permutation of [0, n); identity mode for ablations."""
    if n <= 0:
        raise ValueError("n must be positive")
    if identity:
        return Interleaver(permutation=np.arange(n), seed=seed)
    perm = np.random.default_rng(seed).permutation(n)
    return Interleaver(permutation=perm, seed=seed)
