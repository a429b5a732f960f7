"""Subcubes of the edge hypercube and the brute-force optimal-plant cost.

A subcube fixes some coordinates of {0,1}^N to bits; over the edge cube of
K_n its fixed-to-1 part is a planted subgraph and its fixed-to-0 part a set
of forbidden pairs.  phi_bruteforce minimises -log P(Y in F) over subcubes
whose conditional induced 4-cycle expectation clears a threshold; natural
logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from . import masks
from .errors import BudgetExceededError, DomainError
from .graphs import c4_expectation_weighted, expected_induced_c4


@dataclass(frozen=True)
class Subcube:
    """A subcube of {0,1}^N: `fixed` maps coordinate index -> bit."""

    N: int
    fixed: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for idx, bit in self.fixed:
            if not 0 <= idx < self.N:
                raise DomainError(f"index {idx} outside ambient dimension {self.N}")
            if bit not in (0, 1):
                raise DomainError(f"bit {bit} must be 0 or 1")
            if idx in seen:
                raise DomainError(f"index {idx} fixed twice")
            seen.add(idx)
        if list(self.fixed) != sorted(self.fixed):
            raise DomainError("fixings must be sorted by index")

    @classmethod
    def of(cls, N: int, fixed) -> "Subcube":
        items = fixed.items() if hasattr(fixed, "items") else fixed
        return cls(N, tuple(sorted((int(i), int(b)) for i, b in items)))

    @classmethod
    def full(cls, N: int) -> "Subcube":
        return cls(N, ())

    def as_dict(self) -> dict[int, int]:
        return dict(self.fixed)

    def ones(self) -> tuple[int, ...]:
        return tuple(i for i, b in self.fixed if b == 1)

    def zeros(self) -> tuple[int, ...]:
        return tuple(i for i, b in self.fixed if b == 0)

    def to_text(self) -> str:
        lines = [f"{self.N} {len(self.fixed)}"]
        lines.extend(f"{i} {b}" for i, b in self.fixed)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Subcube":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows or len(rows[0]) != 2:
            raise DomainError("expected a header line 'N k'")
        N, k = int(rows[0][0]), int(rows[0][1])
        if len(rows) - 1 != k:
            raise DomainError(f"header promises {k} fixings, found {len(rows) - 1}")
        return cls.of(N, ((int(r[0]), int(r[1])) for r in rows[1:]))


def codims(F: Subcube) -> tuple[int, int, int]:
    """(codim, codim0, codim1): total, fixed-to-0 and fixed-to-1 counts."""
    ones = len(F.ones())
    total = len(F.fixed)
    return total, total - ones, ones


def intersect(F1: Subcube, F2: Subcube) -> Subcube | None:
    """Intersection subcube, or None when the fixings conflict."""
    if F1.N != F2.N:
        raise DomainError(f"ambient mismatch: {F1.N} vs {F2.N}")
    merged = F1.as_dict()
    for idx, bit in F2.fixed:
        if merged.setdefault(idx, bit) != bit:
            return None
    return Subcube.of(F1.N, merged)


def supcubes(F: Subcube) -> tuple[Subcube, Subcube]:
    """(one-supcube, zero-supcube): keep only the 1-fixings resp. 0-fixings."""
    f1 = Subcube.of(F.N, ((i, 1) for i in F.ones()))
    f0 = Subcube.of(F.N, ((i, 0) for i in F.zeros()))
    return f1, f0


def subcube_expectation_c4(F: Subcube, n: int, p: float) -> float:
    """E[induced 4-cycle count | Y in F] over the edge cube of K_n."""
    if F.N != comb(n, 2):
        raise DomainError(f"ambient {F.N} != C({n},2)")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0,1]")
    fixed = F.as_dict()

    def weight(e):
        bit = fixed.get(masks.edge_index(n, *e))
        return float(p) if bit is None else float(bit)

    return c4_expectation_weighted(n, weight)


def neg_log_prob(F: Subcube, p: float) -> float:
    """-log P(Y in F) = codim1 log(1/p) + codim0 log(1/(1-p))."""
    _, c0, c1 = codims(F)
    return c1 * math.log(1.0 / p) + c0 * math.log(1.0 / (1.0 - p))


def _one_supcube_scan(n: int, p: float, threshold: float):
    """(min cost, qualifying mask array, expectation array) over planted sets."""
    expect = masks.plant_expectations_all(n, p)
    qual = expect >= threshold
    if not qual.any():
        return math.inf, None, expect
    costs = masks.popcount_all(n).astype(np.float64) * math.log(1.0 / p)
    return float(costs[qual].min()), qual, expect


def phi_bruteforce(
    n: int, p: float, delta: float, one_supcubes_only: bool = False
) -> float:
    """Minimum -log P(Y in F) over subcubes with E_F[X] >= (1+delta) E[X].

    One-supcube mode restricts to all-ones fixings, i.e. planted subgraphs
    (budget n <= 7).  General mode (budget n <= 6) searches all subcubes; it
    prunes by cost against the best one-supcube and the best qualifying
    point cube, which is sound because any subcube meeting the threshold
    contains a qualifying point.  Returns +inf when no subcube qualifies.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p} outside (0,1)")
    limit = 7 if one_supcubes_only else 6
    if n > limit:
        raise BudgetExceededError(
            f"n={n} exceeds the budget ({limit}) for this search mode"
        )
    ex = expected_induced_c4(n, p)
    threshold = (1.0 + delta) * ex
    if threshold <= ex or n < 4:
        return 0.0 if threshold <= ex else math.inf

    best_one, _, _ = _one_supcube_scan(n, p, threshold)
    if one_supcubes_only:
        return best_one

    N = comb(n, 2)
    c1 = math.log(1.0 / p)
    c0 = math.log(1.0 / (1.0 - p))

    counts = masks.c4_counts_all(n)
    point_qual = counts >= threshold
    if not point_qual.any():
        return math.inf  # max X below threshold: no subcube can qualify
    e_counts = masks.popcount_all(n).astype(np.float64)
    point_costs = e_counts * c1 + (N - e_counts) * c0
    best = min(best_one, float(point_costs[point_qual].min()))

    cyc_masks, diag_masks, cyc_bits, diag_bits = masks.pairing_tables(n)
    all_s = masks.all_masks(n)
    pops = masks.popcount_all(n)
    pw = np.power(float(p), np.arange(5))
    qw = np.power(1.0 - float(p), np.arange(3))
    eps_slack = 1e-12 * max(best, 1.0)

    s1_max = int(best / c1 + 1e-12)
    for s1 in all_s[pops <= s1_max].tolist():
        k1 = int(pops[s1])
        cost1 = k1 * c1
        s0_budget = int((best - cost1) / c0 + 1e-12)
        if s0_budget < 0:
            continue
        comp = [b for b in range(N) if not (s1 >> b) & 1]
        sub = masks.spread_bits(np.arange(1 << len(comp), dtype=np.int64), comp)
        keep = masks.popcount(sub, N) <= s0_budget
        sub = sub[keep]
        if sub.size == 0:
            continue
        expect = np.zeros(sub.shape, dtype=np.float64)
        for idx in range(len(cyc_masks)):
            dm = int(diag_masks[idx])
            if s1 & dm:
                continue
            cm = int(cyc_masks[idx])
            a1 = bin(s1 & cm).count("1")
            d0 = np.zeros(sub.shape, dtype=np.int8)
            for b in diag_bits[idx].tolist():
                d0 += ((sub >> b) & 1).astype(np.int8)
            contrib = pw[4 - a1] * qw[2 - d0]
            contrib[(sub & cm) != 0] = 0.0
            expect += contrib
        qual = expect >= threshold
        if qual.any():
            costs = cost1 + masks.popcount(sub[qual], N).astype(np.float64) * c0
            cand = float(costs.min())
            if cand < best - eps_slack:
                best = cand
    return best
