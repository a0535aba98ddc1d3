"""End-to-end Slepian-Wolf pipelines and per-frame metrics.

standard: single aggregate-p LLRs. hybrid: per-plane LLRs, optionally with
a block interleaver applied identically to data, side information, and the
p-assignment. per_bitplane: each plane encoded and decoded on its own
(parallel and sequential decoding are the same computation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bitplane import Interleaver, assign_crossovers
from .corr_channel import BitplaneProfile, CorrelationModel, apply_channel, sample_error
from .ldpc import LdpcCode, bp_decode, compute_syndrome, llr_init
from .quantizer import QuantizerSpec, bits_to_indices, dequantize, indices_to_bits, quantize


class SchemeKind(str, Enum):
    STANDARD = "standard"
    HYBRID = "hybrid"
    HYBRID_NO_INTERLEAVE = "hybrid_no_interleave"
    PER_BITPLANE = "per_bitplane"


class DataKind(str, Enum):
    ACTUAL = "actual"
    ARTIFICIAL = "artificial"


@dataclass(frozen=True)
class FrameResult:
    """Per-frame outcome; mse is NaN for artificial data (no real source)."""

    ber: float
    mse: float
    iterations: int
    converged: bool
    scheme: SchemeKind
    ratio: float
    data_kind: DataKind
    plane: int = 0  # 1-based plane index for per-bitplane runs, else 0


def generate_artificial_side_info(x: np.ndarray, p: float,
                                  rng: np.random.Generator) -> np.ndarray:
    """Pass x through a BSC(p): each bit flipped independently w.p. p."""
    if not 0 <= p <= 0.5:
        raise ValueError(f"p={p} outside [0, 0.5]")
    x = np.asarray(x)
    return (x ^ (rng.random(x.size) < p)).astype(np.uint8)


def measure_metrics(x_true: np.ndarray, x_hat: np.ndarray, x_source: np.ndarray,
                    spec: QuantizerSpec):
    """BER over the code block and reconstruction MSE against the real source.

    Only fully decoded samples enter the MSE; a sample straddling the block
    boundary is dropped.
    """
    x_true = np.asarray(x_true)
    x_hat = np.asarray(x_hat)
    if x_true.shape != x_hat.shape:
        raise ValueError(f"length mismatch: {x_true.shape} vs {x_hat.shape}")
    ber = float(np.mean(x_true != x_hat))
    n_full = x_true.size // spec.bits
    if x_source is None or n_full == 0:
        return ber, float("nan")
    if len(x_source) < n_full:
        raise ValueError(f"need {n_full} source samples, got {len(x_source)}")
    recon = dequantize(spec, bits_to_indices(spec, x_hat[:n_full * spec.bits]))
    mse = float(np.mean((recon - np.asarray(x_source)[:n_full]) ** 2))
    return ber, mse


def _frame_bits(x_source, model, spec, n, rng, data_kind, p_artificial):
    """Quantize the source block and produce the side-information bits."""
    n_samples = -(-n // spec.bits)
    if len(x_source) < n_samples:
        raise ValueError(f"need {n_samples} source samples for n={n}, got {len(x_source)}")
    x_source = np.asarray(x_source[:n_samples])
    x_bits = indices_to_bits(spec, quantize(spec, x_source))[:n]
    if data_kind is DataKind.ARTIFICIAL:
        y_bits = generate_artificial_side_info(x_bits, p_artificial, rng)
    else:
        y = apply_channel(x_source, sample_error(model, n_samples, rng))
        y_bits = indices_to_bits(spec, quantize(spec, y))[:n]
    return x_source, x_bits, y_bits


def run_standard(x_source: np.ndarray, model: CorrelationModel, spec: QuantizerSpec,
                 code: LdpcCode, profile: BitplaneProfile, max_iter: int,
                 rng: np.random.Generator, data_kind: DataKind = DataKind.ACTUAL,
                 ratio: float = math.nan) -> FrameResult:
    """Single-BSC baseline: every variable node gets the aggregate p."""
    fp = profile.floored()
    x_source, x_bits, y_bits = _frame_bits(x_source, model, spec, code.n, rng,
                                           data_kind, fp.aggregate)
    s = compute_syndrome(code, x_bits)
    llr0 = llr_init(y_bits, np.full(code.n, fp.aggregate))
    rep = bp_decode(code, s, llr0, max_iter)
    ber, mse = measure_metrics(x_bits, rep.decoded,
                               x_source if data_kind is DataKind.ACTUAL else None, spec)
    return FrameResult(ber=ber, mse=mse, iterations=rep.iterations,
                       converged=rep.converged, scheme=SchemeKind.STANDARD,
                       ratio=ratio, data_kind=data_kind)


def run_hybrid(x_source: np.ndarray, model: CorrelationModel, spec: QuantizerSpec,
               code: LdpcCode, profile: BitplaneProfile, max_iter: int,
               rng: np.random.Generator, interleaver: Interleaver = None,
               data_kind: DataKind = DataKind.ACTUAL,
               ratio: float = math.nan) -> FrameResult:
    """Multi-BSC decoding: per-plane LLRs, optional block interleaving.

    The same permutation is applied to the data, the side information, and
    the p-assignment, and undone on the decision.
    """
    fp = profile.floored()
    x_source, x_bits, y_bits = _frame_bits(x_source, model, spec, code.n, rng,
                                           data_kind, fp.aggregate)
    p_assign = assign_crossovers(code.n, fp)
    if interleaver is not None:
        x_enc = interleaver.interleave(x_bits)
        y_enc = interleaver.interleave(y_bits)
        p_enc = interleaver.interleave(p_assign)
    else:
        x_enc, y_enc, p_enc = x_bits, y_bits, p_assign
    s = compute_syndrome(code, x_enc)
    rep = bp_decode(code, s, llr_init(y_enc, p_enc), max_iter)
    decoded = interleaver.deinterleave(rep.decoded) if interleaver is not None else rep.decoded
    ber, mse = measure_metrics(x_bits, decoded,
                               x_source if data_kind is DataKind.ACTUAL else None, spec)
    scheme = SchemeKind.HYBRID if interleaver is not None else SchemeKind.HYBRID_NO_INTERLEAVE
    return FrameResult(ber=ber, mse=mse, iterations=rep.iterations,
                       converged=rep.converged, scheme=scheme,
                       ratio=ratio, data_kind=data_kind)


def run_per_bitplane(x_source: np.ndarray, model: CorrelationModel, spec: QuantizerSpec,
                     code: LdpcCode, profile: BitplaneProfile, max_iter: int,
                     rng: np.random.Generator, data_kind: DataKind = DataKind.ACTUAL,
                     ratio: float = math.nan) -> list:
    """Decode each bit-plane independently with its own constant p_k.

    Needs code.n source samples (one code block per plane). Returns one
    FrameResult per plane; for actual data every result carries the MSE of
    the full reconstruction from all decoded planes.
    """
    fp = profile.floored()
    b = spec.bits
    if len(x_source) < code.n:
        raise ValueError(f"need {code.n} source samples, got {len(x_source)}")
    x_source = np.asarray(x_source[:code.n])
    bx = indices_to_bits(spec, quantize(spec, x_source)).reshape(code.n, b)
    if data_kind is DataKind.ACTUAL:
        y = apply_channel(x_source, sample_error(model, code.n, rng))
        by = indices_to_bits(spec, quantize(spec, y)).reshape(code.n, b)
    results = []
    decoded_planes = []
    for k in range(b):
        x_p = np.ascontiguousarray(bx[:, k])
        if data_kind is DataKind.ACTUAL:
            y_p = np.ascontiguousarray(by[:, k])
        else:
            y_p = generate_artificial_side_info(x_p, fp.per_plane[k], rng)
        s = compute_syndrome(code, x_p)
        rep = bp_decode(code, s, llr_init(y_p, np.full(code.n, fp.per_plane[k])), max_iter)
        decoded_planes.append(rep.decoded)
        results.append((rep, float(np.mean(x_p != rep.decoded))))
    mse = float("nan")
    if data_kind is DataKind.ACTUAL:
        recon = dequantize(spec, bits_to_indices(spec, np.stack(decoded_planes).T.reshape(-1)))
        mse = float(np.mean((recon - x_source) ** 2))
    return [FrameResult(ber=ber, mse=mse, iterations=rep.iterations,
                        converged=rep.converged, scheme=SchemeKind.PER_BITPLANE,
                        ratio=ratio, data_kind=data_kind, plane=k + 1)
            for k, (rep, ber) in enumerate(results)]
