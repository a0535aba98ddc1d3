"""Experiment runner: seeded sweeps, CSV emission, and code caching.

Seed derivation: every random stream comes from SeedSequence(master_seed,
spawn_key=(stream, ...)), where stream 0 is profile estimation, 1 is frame
data, and 2 is the per-frame interleaver. Frame keys include the grid-point
index, scheme, data kind, and frame index, so adding frames or reordering
workers never perturbs existing results.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config
from .corr_channel import estimate_bitplane_crossovers, sample_source
from .ldpc import LdpcCode, build_code, code_cache_key, load_alist, save_alist
from .bitplane import make_interleaver
from .schemes import (DataKind, SchemeKind, run_hybrid, run_per_bitplane,
                      run_standard)

PROFILE_SCHEMA = "# swsim-profile-v1"
SWEEP_SCHEMA = "# swsim-sweep-v1"

_SCHEME_CODE = {SchemeKind.STANDARD: 0, SchemeKind.HYBRID: 1,
                SchemeKind.HYBRID_NO_INTERLEAVE: 2, SchemeKind.PER_BITPLANE: 3}
_KIND_CODE = {DataKind.ACTUAL: 0, DataKind.ARTIFICIAL: 1}


def profile_rng(master_seed: int, point: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(0, point)))


def frame_rng(master_seed: int, point: int, scheme: SchemeKind, kind: DataKind,
              frame: int) -> np.random.Generator:
    key = (1, point, _SCHEME_CODE[scheme], _KIND_CODE[kind], frame)
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def interleaver_seed(master_seed: int, point: int, kind: DataKind, frame: int) -> int:
    key = (2, point, _KIND_CODE[kind], frame)
    return int(np.random.SeedSequence(master_seed, spawn_key=key).generate_state(1)[0])


def cache_dir() -> Path:
    return Path(os.environ.get("SWSIM_CACHE_DIR",
                               Path.home() / ".cache" / "swsim"))


def get_code(config: ExperimentConfig, verbose: bool = False) -> LdpcCode:
    """Build the configured code, or reload it from the alist cache."""
    key = code_cache_key(config.distribution, config.n, config.code_seed)
    path = cache_dir() / f"{key}.alist"
    if path.exists():
        if verbose:
            print(f"code cache hit: {path}")
        code = load_alist(path.read_text())
        code.construction_seed = config.code_seed
        return code
    code = build_code(config.distribution, config.n, config.code_seed)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(save_alist(code))
    if verbose:
        print(f"code cached: {path}")
    return code


def _fmt(value) -> str:
    if isinstance(value, float):
        return "nan" if math.isnan(value) else f"{value:.10g}"
    return str(value)


def cmd_profile(config: ExperimentConfig, out) -> None:
    """Estimate the per-plane crossover profile at every grid ratio (CSV)."""
    spec = config.quantizer_spec()
    b = spec.bits
    header = (["ratio", "b"] + [f"p_{k}" for k in range(1, b + 1)]
              + ["aggregate"] + [f"se_{k}" for k in range(1, b + 1)]
              + ["trials", "seed"])
    out.write(PROFILE_SCHEMA + "\n")
    out.write(",".join(header) + "\n")
    for point, ratio in enumerate(config.ratio_grid):
        prof = estimate_bitplane_crossovers(config.model_for_ratio(ratio), spec,
                                            config.profile_trials,
                                            profile_rng(config.master_seed, point))
        row = ([ratio, b] + list(prof.per_plane) + [prof.aggregate]
               + list(prof.std_errors) + [prof.sample_count, config.master_seed])
        out.write(",".join(_fmt(v) for v in row) + "\n")
        out.flush()


def _frame_task(code, config, spec, model, profile, point, ratio, scheme, kind, frame):
    rng = frame_rng(config.master_seed, point, scheme, kind, frame)
    if scheme is SchemeKind.PER_BITPLANE:
        x = sample_source(code.n, rng)
        return run_per_bitplane(x, model, spec, code, profile,
                                config.max_iterations, rng, data_kind=kind, ratio=ratio)
    x = sample_source(-(-code.n // spec.bits), rng)
    if scheme is SchemeKind.STANDARD:
        res = run_standard(x, model, spec, code, profile, config.max_iterations,
                           rng, data_kind=kind, ratio=ratio)
    else:
        il = None
        if scheme is SchemeKind.HYBRID:
            il = make_interleaver(code.n,
                                  interleaver_seed(config.master_seed, point, kind, frame))
        res = run_hybrid(x, model, spec, code, profile, config.max_iterations,
                         rng, interleaver=il, data_kind=kind, ratio=ratio)
    return [res]


def _aggregate_rows(results, ratio, scheme, kind, config):
    """One CSV row per plane group: means, standard errors, convergence rate."""
    rows = []
    planes = sorted({r.plane for r in results})
    for plane in planes:
        grp = [r for r in results if r.plane == plane]
        f = len(grp)
        ber = np.array([r.ber for r in grp])
        mse = np.array([r.mse for r in grp])
        iters = np.array([r.iterations for r in grp], dtype=float)
        conv = np.mean([r.converged for r in grp])
        se = lambda a: float(np.std(a, ddof=1) / np.sqrt(f)) if f > 1 else 0.0
        mse_ok = not np.all(np.isnan(mse))
        rows.append([ratio, scheme.value, kind.value, plane, f,
                     float(ber.mean()), se(ber),
                     float(np.nanmean(mse)) if mse_ok else float("nan"),
                     se(mse[~np.isnan(mse)]) if mse_ok else float("nan"),
                     float(iters.mean()), se(iters), float(conv),
                     config.master_seed])
    return rows


def cmd_sweep(config: ExperimentConfig, out, verbose: bool = False) -> None:
    """Run frames for every (ratio, scheme, data kind) cell; emit aggregates.

    Output rows are written and flushed per grid point so interrupted sweeps
    keep their completed points.
    """
    spec = config.quantizer_spec()
    code = get_code(config, verbose=verbose)
    header = ["ratio", "scheme", "data_kind", "plane", "frames",
              "mean_ber", "se_ber", "mean_mse", "se_mse",
              "mean_iterations", "se_iterations", "convergence_rate", "seed"]
    out.write(SWEEP_SCHEMA + "\n")
    out.write(",".join(header) + "\n")
    executor = (ProcessPoolExecutor(max_workers=config.workers)
                if config.workers > 1 else None)
    try:
        for point, ratio in enumerate(config.ratio_grid):
            profile = estimate_bitplane_crossovers(
                config.model_for_ratio(ratio), spec, config.profile_trials,
                profile_rng(config.master_seed, point))
            for scheme in config.schemes:
                for kind in config.data_kinds:
                    args = [(code, config, spec, config.model_for_ratio(ratio),
                             profile, point, ratio, scheme, kind, frame)
                            for frame in range(config.frames)]
                    if executor is None:
                        batches = [_frame_task(*a) for a in args]
                    else:
                        batches = list(executor.map(_frame_task, *zip(*args),
                                                    chunksize=max(1, config.frames // (4 * config.workers))))
                    results = [r for batch in batches for r in batch]
                    for row in _aggregate_rows(results, ratio, scheme, kind, config):
                        out.write(",".join(_fmt(v) for v in row) + "\n")
                    if verbose:
                        print(f"done ratio={ratio} scheme={scheme.value} kind={kind.value}",
                              file=sys.stderr)
            out.flush()
    finally:
        if executor is not None:
            executor.shutdown()


def cmd_code(config: ExperimentConfig, out) -> LdpcCode:
    """Build/cache the code and print realized degree statistics and girth."""
    code = get_code(config, verbose=True)
    alist = save_alist(code)
    out.write(f"n={code.n} m={code.m} edges={code.edge_count}\n")
    out.write(f"design_rate={config.distribution.design_rate:.6f} "
              f"compression_rate={code.m / code.n:.6f}\n")
    lam = " ".join(f"{d}:{f:.6f}" for d, f in sorted(code.realized_lambda().items()))
    rho = " ".join(f"{d}:{f:.6f}" for d, f in sorted(code.realized_rho().items()))
    out.write(f"realized_lambda {lam}\n")
    out.write(f"realized_rho {rho}\n")
    out.write(f"girth={code.girth()}\n")
    out.write(f"alist_sha256={hashlib.sha256(alist.encode()).hexdigest()}\n")
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="swsim",
        description="LDPC-based Slepian-Wolf simulator with a per-bit-plane "
                    "correlation model")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (("profile", "estimate per-plane crossover probabilities"),
                      ("sweep", "run the BER/MSE/iterations benchmark sweep"),
                      ("code", "build and cache the LDPC code")):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", type=Path, default=None)
        p.add_argument("--seed", type=int, default=None, help="override master seed")
        p.add_argument("--out", type=Path, default=None, help="output path (default stdout)")
        p.add_argument("--frames", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.frames is not None:
        overrides["frames"] = args.frames
    if args.workers is not None:
        overrides["workers"] = args.workers
    config = load_config(args.config, **overrides)
    sink = open(args.out, "w") if args.out is not None else sys.stdout
    try:
        if args.command == "profile":
            cmd_profile(config, sink)
        elif args.command == "sweep":
            cmd_sweep(config, sink, verbose=args.verbose)
        else:
            cmd_code(config, sink)
    finally:
        if args.out is not None:
            sink.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
