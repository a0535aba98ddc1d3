"""Experiment configuration: INI-style file with benchmark defaults.

With no config file at all, the defaults reproduce the benchmark setup:
6-bit quantizer over [-4, 4), Gaussian-Erasure correlation with q1 = 1/5
and q2 = 0, the rate-1/2 irregular code at n = 10^4, and 50 decoder
iterations.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

import numpy as np

from .corr_channel import CorrelationModel
from .ldpc import RATE_HALF_IRREGULAR, DegreeDistribution
from .quantizer import BitLabeling, QuantizerSpec
from .schemes import DataKind, SchemeKind


class ConfigError(ValueError):
    pass


DEFAULT_RATIO_GRID = tuple(np.round(np.geomspace(0.1, 4.0, 9), 6))


@dataclass(frozen=True)
class ExperimentConfig:
    # quantizer
    bits: int = 6
    range_low: float = -4.0
    range_high: float = 4.0
    labeling: BitLabeling = BitLabeling.NATURAL
    # correlation
    q1: float = 0.2
    q2: float = 0.0
    sigma_i_sq: float = 10.0
    ratio_grid: tuple = DEFAULT_RATIO_GRID
    # code
    distribution: DegreeDistribution = RATE_HALF_IRREGULAR
    n: int = 10_000
    code_seed: int = 1
    # decode
    max_iterations: int = 50
    # run
    frames: int = 100
    master_seed: int = 12345
    workers: int = 1
    schemes: tuple = (SchemeKind.STANDARD, SchemeKind.HYBRID)
    data_kinds: tuple = (DataKind.ACTUAL, DataKind.ARTIFICIAL)
    profile_trials: int = 1_000_000

    def __post_init__(self):
        if self.q1 < 0 or self.q2 < 0:
            raise ConfigError("q1 and q2 must be nonnegative")
        if self.q1 + self.q2 > 1:
            raise ConfigError(f"q1+q2 > 1 (got {self.q1 + self.q2})")
        grid = tuple(float(r) for r in self.ratio_grid)
        if any(r <= 0 for r in grid):
            raise ConfigError("ratio_grid must be strictly positive")
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise ConfigError("ratio_grid unsorted")
        object.__setattr__(self, "ratio_grid", grid)
        if not self.range_high > self.range_low:
            raise ConfigError("quantizer range is empty")
        if self.bits < 1 or self.n < 1 or self.max_iterations < 0:
            raise ConfigError("bits, n must be positive and max_iterations nonnegative")
        if self.frames < 1 or self.workers < 1:
            raise ConfigError("frames and workers must be positive")
        self.quantizer_spec()  # validates geometry

    def quantizer_spec(self) -> QuantizerSpec:
        return QuantizerSpec.from_range(self.bits, self.range_low, self.range_high,
                                        self.labeling)

    def model_for_ratio(self, ratio: float) -> CorrelationModel:
        """sigma_e^2 = ratio * step^2/12 at this quantizer's step size."""
        sigma_e_sq = ratio * self.quantizer_spec().noise_variance
        return CorrelationModel(sigma_e_sq=sigma_e_sq, sigma_i_sq=self.sigma_i_sq,
                                q1=self.q1, q2=self.q2)


def _parse_coeffs(text: str, name: str):
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            deg, frac = item.split(":")
            out.append((int(deg), float(frac)))
        except ValueError:
            raise ConfigError(f"{name}: cannot parse term {item!r} (want degree:fraction)")
    return tuple(out)


def _parse_list(text: str, conv, name: str):
    try:
        return tuple(conv(tok.strip()) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}")


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Load an INI config; missing keys fall back to the benchmark defaults.

    Keyword overrides (e.g. frames=10) win over the file.
    """
    kwargs = {}
    if path is not None:
        parser = configparser.ConfigParser()
        with open(path) as fh:  # missing file raises FileNotFoundError
            parser.read_file(fh, source=str(path))
        q = parser["quantizer"] if parser.has_section("quantizer") else {}
        if "bits" in q:
            kwargs["bits"] = int(q["bits"])
        if "range_low" in q:
            kwargs["range_low"] = float(q["range_low"])
        if "range_high" in q:
            kwargs["range_high"] = float(q["range_high"])
        if "labeling" in q:
            try:
                kwargs["labeling"] = BitLabeling(q["labeling"])
            except ValueError:
                raise ConfigError(f"labeling: unknown value {q['labeling']!r}")
        c = parser["correlation"] if parser.has_section("correlation") else {}
        for key in ("q1", "q2", "sigma_i_sq"):
            if key in c:
                kwargs[key] = float(c[key])
        if "ratio_grid" in c:
            kwargs["ratio_grid"] = _parse_list(c["ratio_grid"], float, "ratio_grid")
        d = parser["code"] if parser.has_section("code") else {}
        if "n" in d:
            kwargs["n"] = int(d["n"])
        if "seed" in d:
            kwargs["code_seed"] = int(d["seed"])
        if "lambda" in d or "rho" in d:
            if not ("lambda" in d and "rho" in d):
                raise ConfigError("lambda and rho must be given together")
            kwargs["distribution"] = DegreeDistribution(
                _parse_coeffs(d["lambda"], "lambda"), _parse_coeffs(d["rho"], "rho"))
        dec = parser["decode"] if parser.has_section("decode") else {}
        if "max_iterations" in dec:
            kwargs["max_iterations"] = int(dec["max_iterations"])
        r = parser["run"] if parser.has_section("run") else {}
        for key in ("frames", "master_seed", "workers", "profile_trials"):
            if key in r:
                kwargs[key] = int(r[key])
        if "schemes" in r:
            try:
                kwargs["schemes"] = tuple(SchemeKind(s)
                                          for s in _parse_list(r["schemes"], str, "schemes"))
            except ValueError as exc:
                raise ConfigError(f"schemes: {exc}")
        if "data_kinds" in r:
            try:
                kwargs["data_kinds"] = tuple(DataKind(s)
                                             for s in _parse_list(r["data_kinds"], str, "data_kinds"))
            except ValueError as exc:
                raise ConfigError(f"data_kinds: {exc}")
    kwargs.update(overrides)
    try:
        return ExperimentConfig(**kwargs)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc))
