"""LDPC-based Slepian-Wolf compression of correlated continuous sources.

Models the binary-domain correlation of quantized sources with one BSC per
bit-plane, and decodes with per-variable LLR initialization plus optional
block interleaving (hybrid decoding).
"""

from .quantizer import BitLabeling, QuantizerSpec, quantize, dequantize
from .corr_channel import (BitplaneProfile, CorrelationModel,
                           estimate_aggregate_crossover,
                           estimate_bitplane_crossovers)
from .ldpc import (DecodeReport, DegreeDistribution, LdpcCode,
                   RATE_HALF_IRREGULAR, bp_decode, build_code,
                   compute_syndrome, llr_init, load_alist, save_alist)
from .bitplane import (Interleaver, assign_crossovers, make_interleaver,
                       merge_bitplanes, split_bitplanes)
from .schemes import (DataKind, FrameResult, SchemeKind,
                      generate_artificial_side_info, measure_metrics,
                      run_hybrid, run_per_bitplane, run_standard)
from .config import ConfigError, ExperimentConfig, load_config

__version__ = "0.1.0"
