"""The four random bipartite models.

* ``gr``  — t edge slots drawn uniformly with replacement.
* ``gr1`` — gr conditioned on minimum degree 1 on both sides, sampled by
            rejection (reference implementation; acceptance decays fast
            when t barely exceeds max(m, n)).
* ``tp``  — configuration model: truncated-Poisson degree vectors
            conditioned to sum to t on each side, stubs paired by a
            uniform permutation. Distribution-identical to ``gr1`` and
            the fast path at scale.
* ``er``  — independent edges with probability p on an M x N grid.

All generators are pure functions of their arguments and an explicit rng
stream; identical seeds reproduce identical graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import TruncatedPoissonParams, sample_truncated, solve_rate
from .errors import AttemptsExhausted, InputError
from .graph import BipartiteMultigraph
from .rng import make_stream

__all__ = [
    "ModelSpec",
    "sample_gr",
    "sample_gr1",
    "sample_tp",
    "sample_er",
    "er_params_for",
    "tp_multiset_counts",
    "gr_multiset_counts",
]

DEFAULT_MAX_ATTEMPTS = 10**6


@dataclass(frozen=True)
class ModelSpec:
    """Which generator to run, with its parameters and seed."""

    kind: str  # "gr" | "gr1" | "tp" | "er"
    m: int
    n: int
    t: int | None = None
    p: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("gr", "gr1", "tp", "er"):
            raise InputError(f"unknown model kind {self.kind!r}")
        if self.m < 1 or self.n < 1:
            raise InputError("m and n must be >= 1")
        if self.kind == "er":
            if self.p is None or not (0.0 <= self.p <= 1.0):
                raise InputError("er requires edge probability p in [0, 1]")
        else:
            if self.t is None or self.t < 0:
                raise InputError(f"{self.kind} requires an edge count t >= 0")
            if self.kind in ("gr1", "tp") and self.t < max(self.m, self.n):
                raise InputError(
                    f"{self.kind} requires t >= max(m, n) so every vertex can reach degree 1"
                )

    def sample(self, rng: np.random.Generator | None = None) -> BipartiteMultigraph:
        rng = make_stream(self.seed) if rng is None else rng
        if self.kind == "gr":
            return sample_gr(self.m, self.n, self.t, rng)
        if self.kind == "gr1":
            return sample_gr1(self.m, self.n, self.t, rng)
        if self.kind == "tp":
            return sample_tp(self.m, self.n, self.t, rng)
        return sample_er(self.m, self.n, self.p, rng)


def sample_gr(m: int, n: int, t: int, rng: np.random.Generator) -> BipartiteMultigraph:
    """t independent uniform draws from the m*n edge slots, in draw order."""
    if m < 1 or n < 1:
        raise InputError("m and n must be >= 1")
    if t < 0:
        raise InputError("t must be >= 0")
    codes = rng.integers(0, m * n, size=t)
    edges = np.column_stack((codes // n, codes % n))
    return BipartiteMultigraph(m, n, edges)


def _gr1_acceptance_estimate(m: int, n: int, t: int) -> float:
    return (-math.expm1(-t / m)) ** m * (-math.expm1(-t / n)) ** n


def sample_gr1(
    m: int,
    n: int,
    t: int,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> BipartiteMultigraph:
    """Uniform sample with minimum degree 1: redraw gr until no vertex is isolated."""
    if t < max(m, n):
        raise InputError(
            f"t={t} < max(m, n)={max(m, n)}: some vertex must stay isolated"
        )
    if max_attempts < 1:
        raise InputError("max_attempts must be >= 1")
    for _ in range(max_attempts):
        g = sample_gr(m, n, t, rng)
        left = np.bincount(g.edges[:, 0], minlength=m)
        if left.min() == 0:
            continue
        right = np.bincount(g.edges[:, 1], minlength=n)
        if right.min() == 0:
            continue
        return g
    raise AttemptsExhausted(
        f"no min-degree-1 sample in {max_attempts} attempts at (m={m}, n={n}, t={t}); "
        f"estimated acceptance probability {_gr1_acceptance_estimate(m, n, t):.3e}"
    )


def _conditioned_batch_size(params: TruncatedPoissonParams, count: int) -> int:
    # Local CLT: P(sum hits its target) ~ 1/sqrt(2 pi var count). Batches of
    # roughly a fifth of the expected waiting time keep the overshoot small.
    p_hit = 1.0 / math.sqrt(2.0 * math.pi * params.variance * count)
    return int(min(4096, max(8, round(0.2 / p_hit))))


def _degrees_summing_to(
    count: int,
    total: int,
    rng: np.random.Generator,
    max_attempts: int,
) -> np.ndarray:
    """One vector of `count` iid truncated-Poisson degrees conditioned on
    summing to `total`, by whole-vector rejection (exact conditional law)."""
    if total == count:
        return np.ones(count, dtype=np.int64)  # forced: every degree is 1
    if count == 1:
        return np.array([total], dtype=np.int64)  # forced single vertex
    params = solve_rate(total / count)
    batch = _conditioned_batch_size(params, count)
    attempts = 0
    while attempts < max_attempts:
        draws = sample_truncated(params, rng, batch * count).reshape(batch, count)
        hits = np.flatnonzero(draws.sum(axis=1) == total)
        if hits.size:
            return draws[hits[0]].astype(np.int64)
        attempts += batch
    raise AttemptsExhausted(
        f"degree-sum conditioning failed after {attempts} resampled vectors "
        f"(count={count}, total={total})"
    )


def _degrees_summing_to_many(
    vectors: int,
    count: int,
    total: int,
    rng: np.random.Generator,
    max_attempts: int | None = None,
) -> np.ndarray:
    """Stacked conditioned degree vectors, shape (vectors, count)."""
    if total == count:
        return np.ones((vectors, count), dtype=np.int64)
    if count == 1:
        return np.full((vectors, 1), total, dtype=np.int64)
    params = solve_rate(total / count)
    p_hit = 1.0 / math.sqrt(2.0 * math.pi * params.variance * count)
    if max_attempts is None:
        max_attempts = int(1000 + 30 * vectors / p_hit)
    chunk_rows = max(64, min(int(1.2 * vectors / p_hit) + 1, 4_000_000 // max(count, 1)))
    collected: list[np.ndarray] = []
    have = 0
    attempts = 0
    while have < vectors:
        if attempts >= max_attempts:
            raise AttemptsExhausted(
                f"bulk degree-sum conditioning stalled after {attempts} vectors "
                f"(count={count}, total={total})"
            )
        draws = sample_truncated(params, rng, chunk_rows * count).reshape(
            chunk_rows, count
        )
        hits = draws[draws.sum(axis=1) == total]
        attempts += chunk_rows
        if hits.shape[0]:
            collected.append(hits)
            have += hits.shape[0]
    return np.concatenate(collected)[:vectors].astype(np.int64)


def sample_tp(
    m: int,
    n: int,
    t: int,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> BipartiteMultigraph:
    """Truncated-Poisson configuration model.

    Left degrees are iid truncated Poisson with mean t/m conditioned to sum
    to t (rejection), right degrees likewise with mean t/n; vertex stubs are
    then paired by a single uniform permutation and collapsed.
    """
    if m < 1 or n < 1:
        raise InputError("m and n must be >= 1")
    if t < max(m, n):
        raise InputError(
            f"t={t} < max(m, n)={max(m, n)}: some vertex must stay isolated"
        )
    left_deg = _degrees_summing_to(m, t, rng, max_attempts)
    right_deg = _degrees_summing_to(n, t, rng, max_attempts)
    left_stubs = np.repeat(np.arange(m, dtype=np.int64), left_deg)
    right_stubs = np.repeat(np.arange(n, dtype=np.int64), right_deg)
    paired = right_stubs[rng.permutation(t)]
    return BipartiteMultigraph(m, n, np.column_stack((left_stubs, paired)))


def sample_er(
    m: int, n: int, p: float, rng: np.random.Generator
) -> BipartiteMultigraph:
    """Each of the m*n possible edges present independently with probability p
    (simple graph, row-major edge order)."""
    if m < 1 or n < 1:
        raise InputError("m and n must be >= 1")
    if not (0.0 <= p <= 1.0) or not math.isfinite(p):
        raise InputError(f"edge probability must lie in [0, 1], got {p}")
    if m * n > 1 << 28:
        raise InputError("grid too large for the dense independent-edge sampler")
    mask = rng.random((m, n)) < p
    edges = np.argwhere(mask)
    return BipartiteMultigraph(m, n, edges)


def er_params_for(m: int, n: int, t: int) -> tuple[int, int, float]:
    """Map (m, n, t) to the independent-edge model that mimics it after
    isolated vertices are removed.

    Returns (M, N, p) with M = round(t/rate_left), N = round(t/rate_right),
    p = rate_left*rate_right/t. Rounding to integers is an approximation the
    continuous correspondence does not need; minimum 1 per side.
    """
    if t < max(m, n) or t / m <= 1.0 or t / n <= 1.0:
        raise InputError("requires t/m > 1 and t/n > 1")
    a = solve_rate(t / m).rate
    b = solve_rate(t / n).rate
    big_m = max(1, round(t / a))
    big_n = max(1, round(t / b))
    return big_m, big_n, a * b / t


# ----------------------------------------------------------------------
# Bulk campaign samplers: many independent samples reduced to canonical
# edge multisets (vertex labels kept, edge order erased). These power the
# distribution-equivalence verification at small (m, n, t).
# ----------------------------------------------------------------------


def _multiset_counts_from_codes(code_rows: np.ndarray) -> dict[tuple[int, ...], int]:
    ordered = np.sort(code_rows, axis=1)
    uniq, counts = np.unique(ordered, axis=0, return_counts=True)
    return {tuple(int(v) for v in row): int(c) for row, c in zip(uniq, counts)}


def tp_multiset_counts(
    m: int,
    n: int,
    t: int,
    samples: int,
    rng: np.random.Generator,
    max_attempts: int | None = None,
) -> dict[tuple[int, ...], int]:
    """Empirical distribution of the tp model over canonical edge multisets.

    Vectorizes the same construction as :func:`sample_tp` across all samples:
    conditioned degree vectors, stub expansion, per-row uniform pairing.
    Keys are sorted tuples of edge codes left*n + right.
    """
    if t < max(m, n):
        raise InputError("t must be >= max(m, n)")
    if samples < 1:
        raise InputError("samples must be >= 1")
    left = _degrees_summing_to_many(samples, m, t, rng, max_attempts)
    right = _degrees_summing_to_many(samples, n, t, rng, max_attempts)
    # each row sums to t, so the flattened repeat reshapes cleanly
    left_stubs = np.repeat(np.tile(np.arange(m, dtype=np.int64), samples), left.ravel())
    left_stubs = left_stubs.reshape(samples, t)
    right_stubs = np.repeat(
        np.tile(np.arange(n, dtype=np.int64), samples), right.ravel()
    ).reshape(samples, t)
    paired = rng.permuted(right_stubs, axis=1)
    return _multiset_counts_from_codes(left_stubs * n + paired)


def gr_multiset_counts(
    m: int,
    n: int,
    t: int,
    samples: int,
    rng: np.random.Generator,
    require_min_degree: bool = True,
    chunk: int = 1 << 16,
) -> dict[tuple[int, ...], int]:
    """Empirical distribution of gr (or gr1 when require_min_degree) over
    canonical edge multisets, for small instances (m, n <= 62)."""
    if m > 62 or n > 62:
        raise InputError("bulk gr sampling uses 64-bit coverage masks; m, n <= 62")
    if samples < 1:
        raise InputError("samples must be >= 1")
    full_left = (1 << m) - 1
    full_right = (1 << n) - 1
    kept: list[np.ndarray] = []
    have = 0
    while have < samples:
        codes = rng.integers(0, m * n, size=(chunk, t))
        if require_min_degree:
            left_mask = np.bitwise_or.reduce(1 << (codes // n), axis=1)
            right_mask = np.bitwise_or.reduce(1 << (codes % n), axis=1)
            codes = codes[(left_mask == full_left) & (right_mask == full_right)]
        if codes.shape[0]:
            kept.append(codes)
            have += codes.shape[0]
    rows = np.concatenate(kept)[:samples]
    return _multiset_counts_from_codes(rows)
