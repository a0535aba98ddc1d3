"""Uniform scalar quantization and bit serialization.

Samples are mapped to b-bit cell indices over a fixed range; out-of-range
samples saturate to the extreme cells.  Bit serialization is LSB-first, so
bit position 1 is the least significant bit of each sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class BitLabeling(Enum):
    """Index-to-codeword labeling before bit splitting."""

    NATURAL = "natural"
    GRAY = "gray"


@dataclass(frozen=True)
class QuantizerSpec:
    """Geometry of a b-bit uniform scalar quantizer.

    Cell i covers [lower_edge + i*step, lower_edge + (i+1)*step).
    """

    bits: int
    step: float
    lower_edge: float
    labeling: BitLabeling = BitLabeling.NATURAL

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 1:
            raise ValueError(f"bits must be a positive integer, got {self.bits!r}")
        if not math.isfinite(self.step) or self.step <= 0:
            raise ValueError(f"step must be a positive finite real, got {self.step!r}")
        if not math.isfinite(self.lower_edge):
            raise ValueError(f"lower_edge must be finite, got {self.lower_edge!r}")

    @classmethod
    def from_range(cls, bits: int, low: float = -4.0, high: float = 4.0,
                   labeling: BitLabeling = BitLabeling.NATURAL) -> "QuantizerSpec":
        """Quantizer covering [low, high) with 2^bits cells."""
        if not high > low:
            raise ValueError(f"empty range [{low}, {high})")
        return cls(bits=bits, step=(high - low) / (1 << bits), lower_edge=low,
                   labeling=labeling)

    @property
    def levels(self) -> int:
        return 1 << self.bits

    @property
    def upper_edge(self) -> float:
        return self.lower_edge + self.levels * self.step

    @property
    def noise_variance(self) -> float:
        """Quantization noise variance step^2/12 for in-range uniform input."""
        return self.step * self.step / 12.0


def quantize(spec: QuantizerSpec, sample):
    """Map real sample(s) to cell indices in [0, 2^b); saturates out of range.

    Accepts a scalar or an array; returns an int or an int64 array.
    """
    arr = np.asarray(sample, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample must be finite")
    idx = np.floor((arr - spec.lower_edge) / spec.step).astype(np.int64)
    idx = np.clip(idx, 0, spec.levels - 1)
    return int(idx) if np.isscalar(sample) or arr.ndim == 0 else idx


def dequantize(spec: QuantizerSpec, index):
    """Reconstruct at the cell midpoint lower_edge + (index + 0.5)*step."""
    idx = np.asarray(index)
    if np.any(idx < 0) or np.any(idx >= spec.levels):
        raise ValueError(f"index out of range [0, {spec.levels})")
    val = spec.lower_edge + (idx + 0.5) * spec.step
    return float(val) if np.isscalar(index) or idx.ndim == 0 else val


def _label_encode(spec: QuantizerSpec, idx):
    if spec.labeling is BitLabeling.GRAY:
        return idx ^ (idx >> 1)
    return idx


def _label_decode(spec: QuantizerSpec, code):
    if spec.labeling is BitLabeling.GRAY:
        idx = np.array(code, copy=True)
        shift = 1
        while shift < spec.bits:
            idx = idx ^ (idx >> shift)
            shift <<= 1
        return idx
    return code


def index_to_bits(index: int, b: int) -> np.ndarray:
    """Natural binary bits of an index, LSB first, length b."""
    if not 0 <= index < (1 << b):
        raise ValueError(f"index {index} out of range [0, {1 << b})")
    return (index >> np.arange(b)) & 1


def bits_to_index(bits, b: int) -> int:
    """Inverse of index_to_bits; bits must have length b."""
    bits = np.asarray(bits)
    if bits.shape != (b,):
        raise ValueError(f"expected {b} bits, got shape {bits.shape}")
    return int(np.sum(bits.astype(np.int64) << np.arange(b)))


def indices_to_bits(spec: QuantizerSpec, indices: np.ndarray) -> np.ndarray:
    """Serialize an index array to a flat bit stream, LSB-first per sample.

    Applies the spec's labeling before splitting, so the stream is what the
    correlation channel and the encoder actually see.
    """
    codes = _label_encode(spec, np.asarray(indices, dtype=np.int64))
    bits = (codes[:, None] >> np.arange(spec.bits)) & 1
    return bits.reshape(-1).astype(np.uint8)


def bits_to_indices(spec: QuantizerSpec, bits: np.ndarray) -> np.ndarray:
    """Inverse of indices_to_bits; bit stream length must be divisible by b."""
    bits = np.asarray(bits)
    if bits.size % spec.bits != 0:
        raise ValueError(f"bit stream length {bits.size} not divisible by b={spec.bits}")
    codes = bits.reshape(-1, spec.bits).astype(np.int64) @ (1 << np.arange(spec.bits))
    return _label_decode(spec, codes)
