"""LDPC code construction, syndrome encoding, and sum-product decoding.

Compression is syndrome-based: the encoder transmits s = Hx; the decoder
runs belief propagation on the code graph with check-node signs flipped
wherever the syndrome bit is 1, starting from per-variable channel LLRs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import peg

LLR_CLAMP = 30.0


class AlistParseError(ValueError):
    """Malformed alist text; carries the 1-based offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DegreeDistribution:
    """Edge-perspective degree distributions of variable and check nodes."""

    lambda_coeffs: tuple
    rho_coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "lambda_coeffs",
                           tuple((int(d), float(f)) for d, f in self.lambda_coeffs))
        object.__setattr__(self, "rho_coeffs",
                           tuple((int(d), float(f)) for d, f in self.rho_coeffs))
        for name, coeffs in (("lambda", self.lambda_coeffs), ("rho", self.rho_coeffs)):
            total = sum(f for _, f in coeffs)
            if abs(total - 1.0) > 1e-6:
                raise ValueError(f"{name} fractions sum to {total}, expected 1")
            if any(d < 1 for d, _ in coeffs) or any(f < 0 for _, f in coeffs):
                raise ValueError(f"invalid {name} coefficients")

    @property
    def design_rate(self) -> float:
        lam = sum(f / d for d, f in self.lambda_coeffs)
        rho = sum(f / d for d, f in self.rho_coeffs)
        return 1.0 - rho / lam

    def canonical_string(self) -> str:
        lam = ",".join(f"{d}:{f!r}" for d, f in sorted(self.lambda_coeffs))
        rho = ",".join(f"{d}:{f!r}" for d, f in sorted(self.rho_coeffs))
        return f"lambda[{lam}]rho[{rho}]"

    @classmethod
    def regular(cls, var_deg: int, chk_deg: int) -> "DegreeDistribution":
        return cls(((var_deg, 1.0),), ((chk_deg, 1.0),))


# Rate-1/2 irregular distribution used throughout the benchmark sweeps.
RATE_HALF_IRREGULAR = DegreeDistribution(
    lambda_coeffs=((2, 0.234029), (3, 0.212425), (6, 0.146898),
                   (7, 0.102840), (20, 0.303808)),
    rho_coeffs=((8, 0.71875), (9, 0.28125)),
)


@dataclass
class DecodeReport:
    """Outcome of one belief-propagation decode."""

    decoded: np.ndarray
    converged: bool
    iterations: int
    final_syndrome_mismatch: int
    posterior_llr: np.ndarray = None


class LdpcCode:
    """Sparse parity-check graph with flat edge arrays for fast decoding."""

    def __init__(self, n: int, check_rows, declared_rate: float,
                 construction_seed: int = 0):
        self.n = int(n)
        self.m = len(check_rows)
        self.declared_rate = float(declared_rate)
        self.construction_seed = int(construction_seed)
        e_chk = []
        e_var = []
        for j, row in enumerate(check_rows):
            row = [int(v) for v in row]
            if len(set(row)) != len(row):
                raise ValueError(f"duplicate edge on check {j}")
            if row and (min(row) < 0 or max(row) >= self.n):
                raise ValueError(f"variable index out of range on check {j}")
            e_chk.extend([j] * len(row))
            e_var.extend(row)
        self.e_chk = np.asarray(e_chk, dtype=np.int64)
        self.e_var = np.asarray(e_var, dtype=np.int64)
        self.chk_deg = np.bincount(self.e_chk, minlength=self.m).astype(np.int64)
        if np.any(self.chk_deg == 0):
            raise ValueError("degree-0 check node")
        self.chk_ptr = np.concatenate(([0], np.cumsum(self.chk_deg)[:-1]))
        self.var_deg = np.bincount(self.e_var, minlength=self.n).astype(np.int64)

    @property
    def edge_count(self) -> int:
        return self.e_var.size

    def check_rows(self):
        """Adjacency as a list of sorted variable-index arrays per check."""
        out = []
        for j in range(self.m):
            lo = self.chk_ptr[j]
            out.append(np.sort(self.e_var[lo:lo + self.chk_deg[j]]))
        return out

    def var_rows(self):
        """Adjacency as a list of sorted check-index arrays per variable."""
        order = np.argsort(self.e_var, kind="stable")
        out = []
        ptr = np.concatenate(([0], np.cumsum(self.var_deg)))
        chk_sorted = self.e_chk[order]
        for i in range(self.n):
            out.append(np.sort(chk_sorted[ptr[i]:ptr[i + 1]]))
        return out

    def realized_lambda(self) -> dict:
        """Realized edge-perspective variable degree fractions."""
        counts = np.bincount(self.var_deg[self.e_var])
        return {d: c / self.edge_count for d, c in enumerate(counts) if c}

    def realized_rho(self) -> dict:
        counts = np.bincount(self.chk_deg[self.e_chk])
        return {d: c / self.edge_count for d, c in enumerate(counts) if c}

    def girth(self) -> int:
        """Exact Tanner-graph girth (BFS); -1 if acyclic."""
        cap_c = int(self.chk_deg.max())
        cap_v = int(self.var_deg.max())
        chk_adj = np.full((self.m, cap_c), -1, np.int32)
        var_adj = np.full((self.n, cap_v), -1, np.int32)
        cpos = np.zeros(self.m, np.int32)
        vpos = np.zeros(self.n, np.int32)
        for c, v in zip(self.e_chk, self.e_var):
            chk_adj[c, cpos[c]] = v
            cpos[c] += 1
            var_adj[v, vpos[v]] = c
            vpos[v] += 1
        return int(peg.tanner_girth(chk_adj, cpos, var_adj, vpos))

    def __eq__(self, other):
        if not isinstance(other, LdpcCode):
            return NotImplemented
        return (self.n == other.n and self.m == other.m
                and all(np.array_equal(a, b)
                        for a, b in zip(self.check_rows(), other.check_rows())))


def _largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    """Integer counts proportional to weights, summing exactly to total.

    Leftover units go to the largest fractional remainders; exact ties go
    to the later (higher-degree) entry.
    """
    raw = weights / weights.sum() * total
    counts = np.floor(raw).astype(np.int64)
    short = total - counts.sum()
    if short > 0:
        rem = raw - counts
        order = np.lexsort((-np.arange(len(rem)), -rem))
        counts[order[:short]] += 1
    return counts


def build_code(dist: DegreeDistribution, n: int, seed: int) -> LdpcCode:
    """Construct a PEG graph realizing the degree distribution at length n."""
    degrees = np.array([d for d, _ in dist.lambda_coeffs], dtype=np.int64)
    node_weights = np.array([f / d for d, f in dist.lambda_coeffs])
    counts = _largest_remainder(node_weights, n)
    for d, c in zip(degrees, counts):
        if c < 1:
            raise ValueError(f"n={n} too small: degree {d} gets no variable node")
    var_degree = np.repeat(degrees, counts).astype(np.int32)
    e_total = int(var_degree.sum())
    m = int(round(e_total * sum(f / d for d, f in dist.rho_coeffs)))
    cap = e_total // m + 10
    chk_adj, chk_deg, status = peg.peg_construct(var_degree, m, cap, seed)
    if status < 0:
        raise ValueError(f"PEG construction stuck at variable {-status - 1}")
    rows = [chk_adj[j, :chk_deg[j]] for j in range(m)]
    return LdpcCode(n=n, check_rows=rows, declared_rate=dist.design_rate,
                    construction_seed=seed)


def compute_syndrome(code: LdpcCode, x: np.ndarray) -> np.ndarray:
    """s_j = XOR of x over the variables on check j (the compressed message)."""
    x = np.asarray(x)
    if x.shape != (code.n,):
        raise ValueError(f"expected {code.n} bits, got shape {x.shape}")
    sums = np.add.reduceat(x.astype(np.int64)[code.e_var], code.chk_ptr)
    return (sums & 1).astype(np.uint8)


def llr_init(y: np.ndarray, p_assign: np.ndarray) -> np.ndarray:
    """Channel LLRs (1-2y)*ln((1-p)/p); positive favors bit 0."""
    y = np.asarray(y)
    p = np.asarray(p_assign, dtype=np.float64)
    if y.shape != p.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {p.shape}")
    if np.any(p <= 0) or np.any(p > 0.5):
        raise ValueError("crossover probabilities must lie in (0, 0.5]")
    return (1 - 2 * y.astype(np.float64)) * np.log((1 - p) / p)


def bp_decode(code: LdpcCode, s: np.ndarray, llr0: np.ndarray,
              max_iterations: int, early_stop: bool = True) -> DecodeReport:
    """Syndrome-adapted sum-product decoding with a flooding schedule.

    Stops early as soon as the hard decision satisfies the syndrome;
    early_stop=False always runs max_iterations (useful when the posterior
    beliefs themselves are wanted). Non-convergence is a normal outcome,
    reported in the result.
    """
    s = np.asarray(s)
    llr0 = np.asarray(llr0, dtype=np.float64)
    if s.shape != (code.m,) or llr0.shape != (code.n,):
        raise ValueError("syndrome/LLR lengths inconsistent with code")
    syn_sign = 1.0 - 2.0 * s[code.e_chk].astype(np.float64)
    e_var, chk_ptr = code.e_var, code.chk_ptr

    def report(posterior, iterations):
        hard = (posterior < 0).astype(np.uint8)
        mismatch = int(np.count_nonzero(compute_syndrome(code, hard) != s))
        return DecodeReport(decoded=hard, converged=mismatch == 0,
                            iterations=iterations,
                            final_syndrome_mismatch=mismatch,
                            posterior_llr=posterior)

    out = report(llr0, 0)
    if (early_stop and out.converged) or max_iterations == 0:
        return out

    v2c = llr0[e_var]
    for it in range(1, max_iterations + 1):
        t = np.tanh(0.5 * np.clip(v2c, -LLR_CLAMP, LLR_CLAMP))
        mag = np.abs(t)
        np.clip(mag, 1e-300, 1.0 - 1e-15, out=mag)
        logm = np.log(mag)
        neg = (t < 0).astype(np.int64)
        tot_logm = np.add.reduceat(logm, chk_ptr)
        tot_neg = np.add.reduceat(neg, chk_ptr)
        ex_logm = np.minimum(tot_logm[code.e_chk] - logm, -1e-16)
        ex_sign = 1.0 - 2.0 * ((tot_neg[code.e_chk] - neg) & 1)
        c2v = 2.0 * np.arctanh(np.exp(ex_logm)) * ex_sign * syn_sign
        np.clip(c2v, -LLR_CLAMP, LLR_CLAMP, out=c2v)
        posterior = llr0 + np.bincount(e_var, weights=c2v, minlength=code.n)
        out = report(posterior, it)
        if early_stop and out.converged:
            return out
        v2c = posterior[e_var] - c2v
    return out


def save_alist(code: LdpcCode) -> str:
    """Serialize to alist text (1-based adjacency, no zero padding)."""
    var_rows = code.var_rows()
    chk_rows = code.check_rows()
    lines = [f"{code.n} {code.m}",
             f"{int(code.var_deg.max())} {int(code.chk_deg.max())}",
             " ".join(str(int(d)) for d in code.var_deg),
             " ".join(str(int(d)) for d in code.chk_deg)]
    for row in var_rows:
        lines.append(" ".join(str(int(c) + 1) for c in row))
    for row in chk_rows:
        lines.append(" ".join(str(int(v) + 1) for v in row))
    return "\n".join(lines) + "\n"


def _parse_int_line(lines, idx, expect_count=None):
    if idx >= len(lines):
        raise AlistParseError(idx + 1, "unexpected end of file")
    try:
        vals = [int(tok) for tok in lines[idx].split()]
    except ValueError:
        raise AlistParseError(idx + 1, f"non-integer token in {lines[idx]!r}")
    if expect_count is not None and len(vals) != expect_count:
        raise AlistParseError(idx + 1, f"expected {expect_count} integers, got {len(vals)}")
    return vals


def load_alist(text: str) -> LdpcCode:
    """Parse alist text; raises AlistParseError with the offending line."""
    lines = [ln for ln in text.splitlines()]
    n, m = _parse_int_line(lines, 0, 2)
    if n < 1 or m < 1:
        raise AlistParseError(1, f"bad dimensions n={n} m={m}")
    _parse_int_line(lines, 1, 2)
    var_degs = _parse_int_line(lines, 2, n)
    chk_degs = _parse_int_line(lines, 3, m)
    chk_rows = []
    var_edges = set()
    for i in range(n):
        row = _parse_int_line(lines, 4 + i)
        row = [v for v in row if v != 0]  # tolerate zero padding
        if len(row) != var_degs[i]:
            raise AlistParseError(5 + i, f"variable {i + 1} degree mismatch")
        for c in row:
            if not 1 <= c <= m:
                raise AlistParseError(5 + i, f"check index {c} out of range (alist is 1-based)")
            if (i, c) in var_edges:
                raise AlistParseError(5 + i, f"duplicate entry {c}")
            var_edges.add((i, c))
    for j in range(m):
        row = _parse_int_line(lines, 4 + n + j)
        row = [v for v in row if v != 0]
        if len(row) != chk_degs[j]:
            raise AlistParseError(5 + n + j, f"check {j + 1} degree mismatch")
        seen = set()
        for v in row:
            if not 1 <= v <= n:
                raise AlistParseError(5 + n + j, f"variable index {v} out of range (alist is 1-based)")
            if v in seen:
                raise AlistParseError(5 + n + j, f"duplicate entry {v}")
            if (v - 1, j + 1) not in var_edges:
                raise AlistParseError(5 + n + j, f"edge ({v},{j + 1}) missing from variable rows")
            seen.add(v)
        chk_rows.append([v - 1 for v in row])
    total = sum(len(r) for r in chk_rows)
    if total != len(var_edges):
        raise AlistParseError(4 + n, "variable and check adjacency disagree")
    return LdpcCode(n=n, check_rows=chk_rows, declared_rate=1.0 - m / n)


def code_cache_key(dist: DegreeDistribution, n: int, seed: int) -> str:
    """Stable on-disk cache key for a constructed code."""
    payload = f"{dist.canonical_string()}|n={n}|seed={seed}".encode()
    return hashlib.sha256(payload).hexdigest()[:24]
