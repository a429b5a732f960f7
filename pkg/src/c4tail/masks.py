"""Vectorised enumeration over all labelled graphs on a few vertices.

A graph on n vertices is a bitmask over the C(n,2) vertex pairs in
lexicographic order, so the 2^C(n,2) labelled graphs are just the integers
below 2^C(n,2).  Induced 4-cycle counts, plant-conditioned expectations and
tail probabilities are then plain numpy reductions over that range.  The
whole range is tractable for n <= 7 (2^21 masks); callers enforce budgets.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

import numpy as np


def pair_list(n: int) -> list[tuple[int, int]]:
    """Vertex pairs of [n] in lexicographic order; position = edge index."""
    return list(itertools.combinations(range(n), 2))


def edge_index(n: int, u: int, v: int) -> int:
    """Index of pair {u,v} in the lexicographic order of pair_list(n)."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


# The three cycle pairings of a sorted 4-set (a,b,c,d), given as positions:
# cycle edges first, then the two diagonals.
_CYC_POS = (
    (((0, 1), (1, 2), (2, 3), (0, 3)), ((0, 2), (1, 3))),
    (((0, 2), (1, 2), (1, 3), (0, 3)), ((0, 1), (2, 3))),
    (((0, 1), (1, 3), (2, 3), (0, 2)), ((0, 3), (1, 2))),
)


def cycle_pairings(subset):
    """The 3 (cycle-edges, diagonals) pairings of a 4-vertex subset."""
    s = tuple(subset)
    out = []
    for cyc, diag in _CYC_POS:
        out.append(
            (
                tuple((s[i], s[j]) for i, j in cyc),
                tuple((s[i], s[j]) for i, j in diag),
            )
        )
    return out


@lru_cache(maxsize=None)
def pairing_tables(n: int):
    """Bit tables for every (4-subset, pairing) of [n].

    Returns (cycle_masks, diag_masks, cycle_bits, diag_bits) where the
    masks are int64 bitmasks over edge indices and the *_bits arrays hold
    the individual bit positions (shape (P,4) and (P,2)).
    """
    cyc_masks, diag_masks, cyc_bits, diag_bits = [], [], [], []
    for sub in itertools.combinations(range(n), 4):
        for cyc, diag in cycle_pairings(sub):
            cb = [edge_index(n, *e) for e in cyc]
            db = [edge_index(n, *e) for e in diag]
            cyc_bits.append(cb)
            diag_bits.append(db)
            cyc_masks.append(sum(1 << b for b in cb))
            diag_masks.append(sum(1 << b for b in db))
    return (
        np.array(cyc_masks, dtype=np.int64),
        np.array(diag_masks, dtype=np.int64),
        np.array(cyc_bits, dtype=np.int64),
        np.array(diag_bits, dtype=np.int64),
    )


def popcount(masks: np.ndarray, nbits: int) -> np.ndarray:
    out = np.zeros(masks.shape, dtype=np.int16)
    for b in range(nbits):
        out += ((masks >> b) & 1).astype(np.int16)
    return out


def c4_counts_for_masks(n: int, masks: np.ndarray) -> np.ndarray:
    """Induced 4-cycle count (subset convention) for each graph bitmask."""
    cyc_masks, diag_masks, _, _ = pairing_tables(n)
    counts = np.zeros(masks.shape, dtype=np.int16)
    for cm, dm in zip(cyc_masks.tolist(), diag_masks.tolist()):
        counts += ((masks & cm) == cm) & ((masks & dm) == 0)
    return counts


@lru_cache(maxsize=4)
def all_masks(n: int) -> np.ndarray:
    return np.arange(1 << comb(n, 2), dtype=np.int64)


@lru_cache(maxsize=4)
def c4_counts_all(n: int) -> np.ndarray:
    return c4_counts_for_masks(n, all_masks(n))


@lru_cache(maxsize=4)
def popcount_all(n: int) -> np.ndarray:
    return popcount(all_masks(n), comb(n, 2))


def graph_probabilities(n: int, p: float) -> np.ndarray:
    """P(G(n,p) = G) for every labelled graph bitmask G."""
    N = comb(n, 2)
    e = popcount_all(n).astype(np.int64)
    pw_p = np.power(float(p), np.arange(N + 1))
    pw_q = np.power(1.0 - float(p), np.arange(N + 1))
    return pw_p[e] * pw_q[N - e]


def max_induced_c4(n: int) -> int:
    """Maximum induced 4-cycle count over all graphs on n vertices."""
    return int(c4_counts_all(n).max())


def plant_expectations_all(n: int, p: float) -> np.ndarray:
    """Conditional expectation of the induced 4-cycle count given each plant.

    Entry S is E[X | S subseteq G(n,p)] where the bitmask S is read as a
    planted edge set (weight 1 on S, p elsewhere).
    """
    masks = all_masks(n)
    _, _, cyc_bits, diag_bits = pairing_tables(n)
    cyc_masks, diag_masks, _, _ = pairing_tables(n)
    pw = np.power(float(p), np.arange(5))
    q2 = (1.0 - p) ** 2
    out = np.zeros(masks.shape, dtype=np.float64)
    for idx in range(len(cyc_masks)):
        cm = int(cyc_masks[idx])
        dm = int(diag_masks[idx])
        a = np.zeros(masks.shape, dtype=np.int8)
        for b in cyc_bits[idx].tolist():
            a += ((masks >> b) & 1).astype(np.int8)
        contrib = pw[4 - a] * q2
        contrib[(masks & dm) != 0] = 0.0
        out += contrib
    return out


def spread_bits(values: np.ndarray, positions) -> np.ndarray:
    """Embed the low bits of each value into the given bit positions."""
    positions = list(positions)
    c = len(positions)
    if c == 0:
        return np.zeros(values.shape, dtype=np.int64)
    bits = (values[:, None] >> np.arange(c)[None, :]) & 1
    weights = np.array([1 << pos for pos in positions], dtype=np.int64)
    return bits @ weights
