"""Seeded samplers for G(n,p) and conditioned plants, plus tail estimation.

Randomness comes from the Philox counter-based generator with a 64-bit
seed.  Trials are partitioned into fixed-size chunks and chunk c draws from
Philox(key=seed, counter=c << 128), so any worker that owns a chunk
reproduces it independently of how many workers run; aggregation is
order-independent.  Within a graph, pair u < v consumes the uniform at its
edge index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import comb

import numpy as np

from . import masks
from .errors import DomainError
from .graphs import Pattern, SimpleGraph, count_induced, expected_induced_c4

CHUNK = 4096  # trials per Philox counter block; part of the determinism contract


def _chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    bg = np.random.Philox(key=np.uint64(seed), counter=chunk_index << 128)
    return np.random.Generator(bg)


def sample_gnp(n: int, p: float, seed: int) -> SimpleGraph:
    """One draw of G(n,p): each pair present independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0,1]")
    gen = _chunk_generator(seed, 0)
    u = gen.random(comb(n, 2))
    pairs = masks.pair_list(n)
    return SimpleGraph(n, frozenset(pairs[i] for i in np.flatnonzero(u < p)))


def sample_conditioned_FAk(
    n: int, p: float, k: int, A, seed: int
) -> SimpleGraph:
    """Sample G(n,p) conditioned on: no edges inside [k], every vertex of A
    adjacent to all of [k], and every other vertex missing at least one
    edge to [k] (so the common neighbourhood of [k] is exactly A).

    The per-vertex edge pattern towards [k] of the non-A vertices is drawn
    directly from the conditional law on the 2^k - 1 non-full patterns, not
    by rejection.  k = 0 degenerates to plain G(n,p).
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0,1]")
    if k == 0:
        return sample_gnp(n, p, seed)
    if k > 20:
        raise DomainError(f"k={k} pattern table (2^k) too large")
    A = sorted(set(A))
    if any(v < k or v >= n for v in A):
        raise DomainError("A must be a subset of [n] minus the first k vertices")
    gen = _chunk_generator(seed, 0)
    edges: set[tuple[int, int]] = set()
    # forced edges: A to all of [k]
    for a in A:
        for i in range(k):
            edges.add((i, a))
    # conditional patterns for the remaining outside vertices
    rest = [v for v in range(k, n) if v not in set(A)]
    if rest:
        if p >= 1.0:
            raise DomainError("p=1 makes the conditioning event impossible")
        pats = np.arange((1 << k) - 1)  # all-ones pattern (2^k - 1) excluded
        ones = np.array([bin(t).count("1") for t in pats])
        probs = p**ones * (1.0 - p) ** (k - ones)
        probs /= probs.sum()
        draws = gen.choice(len(pats), size=len(rest), p=probs)
        for v, t in zip(rest, pats[draws]):
            for i in range(k):
                if (t >> i) & 1:
                    edges.add((i, v))
    # free pairs: everything with both endpoints outside [k]
    free = [(u, v) for u, v in itertools.combinations(range(k, n), 2)]
    if free:
        uni = gen.random(len(free))
        edges.update(e for e, x in zip(free, uni) if x < p)
    return SimpleGraph.of(n, edges)


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise DomainError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class TailEstimate:
    p_hat: float
    trials: int
    ci_low: float
    ci_high: float
    seed: int

    def as_dict(self) -> dict:
        return {
            "p_hat": self.p_hat,
            "trials": self.trials,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "seed": self.seed,
        }


def estimate_tail(
    n: int, p: float, delta: float, trials: int, seed: int
) -> TailEstimate:
    """Monte Carlo estimate of P(X >= (1+delta) E[X]) with a Wilson 95% CI.

    Vectorised through graph bitmasks for n <= 7; larger n falls back to
    per-sample counting (cost O(trials * n^4)).
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0,1]")
    threshold = (1.0 + delta) * expected_induced_c4(n, p)
    N = comb(n, 2)
    hits = 0
    if threshold <= 0:
        return TailEstimate(1.0, trials, *wilson_interval(trials, trials), seed)
    if n <= 7:
        weights = (np.int64(1) << np.arange(N, dtype=np.int64))[None, :]
        done = 0
        chunk_index = 0
        while done < trials:
            take = min(CHUNK, trials - done)
            gen = _chunk_generator(seed, chunk_index)
            u = gen.random((CHUNK, N))[:take]
            graph_masks = ((u < p) * weights).sum(axis=1)
            counts = masks.c4_counts_for_masks(n, graph_masks)
            hits += int((counts >= threshold).sum())
            done += take
            chunk_index += 1
    else:
        for t in range(trials):
            G = _sample_trial(n, p, seed, t)
            if count_induced(G, Pattern.C4) >= threshold:
                hits += 1
    lo, hi = wilson_interval(hits, trials)
    return TailEstimate(hits / trials, trials, lo, hi, seed)


def _sample_trial(n: int, p: float, seed: int, trial: int) -> SimpleGraph:
    """Trial-indexed draw consistent with the chunked layout."""
    N = comb(n, 2)
    chunk_index, offset = divmod(trial, CHUNK)
    gen = _chunk_generator(seed, chunk_index)
    u = gen.random((offset + 1, N))[offset]
    pairs = masks.pair_list(n)
    return SimpleGraph(n, frozenset(pairs[i] for i in np.flatnonzero(u < p)))
