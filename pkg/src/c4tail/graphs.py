"""Labelled simple graphs and exact induced-pattern counting.

Counting follows the subset convention: a pattern on k vertices is counted
once per vertex k-set whose induced subgraph is isomorphic to it.  Every
4-set admits exactly 3 cycle pairings, so the induced 4-cycle count of
G(n,p) has expectation 3 C(n,4) p^4 (1-p)^2, and all rate normalisations
downstream are consistent with that choice.

On at most 4 vertices the sorted degree sequence of the induced subgraph
identifies its isomorphism class, which keeps the pattern tests branch-free;
a test pins this fact against explicit isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np

from . import masks
from .errors import BudgetExceededError, DomainError

Edge = tuple[int, int]


class Pattern(Enum):
    """Induced patterns on 2 to 4 vertices."""

    C4 = "C4"            # 4-cycle
    P4 = "P4"            # path with 3 edges
    M2 = "M2"            # perfect matching on 4 vertices
    K12_K1 = "K12_K1"    # 2-edge star plus an isolated vertex
    K2_2K1 = "K2_2K1"    # one edge plus two isolated vertices
    K12 = "K12"          # 2-edge star on 3 vertices
    K2 = "K2"            # a single edge

    @property
    def vertex_count(self) -> int:
        return _PATTERN_SIZE[self]


_PATTERN_SIZE = {
    Pattern.C4: 4,
    Pattern.P4: 4,
    Pattern.M2: 4,
    Pattern.K12_K1: 4,
    Pattern.K2_2K1: 4,
    Pattern.K12: 3,
    Pattern.K2: 2,
}

# Sorted degree sequence of each pattern; unique per isomorphism class at
# these sizes.
_PATTERN_DEGSEQ = {
    Pattern.C4: (2, 2, 2, 2),
    Pattern.P4: (1, 1, 2, 2),
    Pattern.M2: (1, 1, 1, 1),
    Pattern.K12_K1: (0, 1, 1, 2),
    Pattern.K2_2K1: (0, 0, 1, 1),
    Pattern.K12: (1, 1, 2),
    Pattern.K2: (1, 1),
}


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise DomainError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on vertex set {0..n-1} with a normalised edge set."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("negative vertex count")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise DomainError(f"edge ({u},{v}) invalid for n={self.n}")

    @classmethod
    def of(cls, n: int, edges=()) -> "SimpleGraph":
        return cls(n, frozenset(_norm_edge(u, v) for u, v in edges))

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset())

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls.of(n, itertools.combinations(range(n), 2))

    @classmethod
    def cycle(cls, k: int, n: int | None = None) -> "SimpleGraph":
        n = k if n is None else n
        return cls.of(n, ((i, (i + 1) % k) for i in range(k)))

    @classmethod
    def path(cls, k: int, n: int | None = None) -> "SimpleGraph":
        n = k if n is None else n
        return cls.of(n, ((i, i + 1) for i in range(k - 1)))

    @classmethod
    def complete_bipartite(cls, s: int, t: int, n: int | None = None) -> "SimpleGraph":
        n = s + t if n is None else n
        return cls.of(n, ((i, s + j) for i in range(s) for j in range(t)))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "SimpleGraph":
        pairs = masks.pair_list(n)
        return cls(n, frozenset(pairs[i] for i in range(len(pairs)) if (mask >> i) & 1))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def with_edge(self, u: int, v: int) -> "SimpleGraph":
        return SimpleGraph(self.n, self.edges | {_norm_edge(u, v)})

    def without_edge(self, u: int, v: int) -> "SimpleGraph":
        return SimpleGraph(self.n, self.edges - {_norm_edge(u, v)})

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def to_mask(self) -> int:
        mask = 0
        for u, v in self.edges:
            mask |= 1 << masks.edge_index(self.n, u, v)
        return mask

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{u} {v}" for u, v in sorted(self.edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimpleGraph":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows or len(rows[0]) != 2:
            raise DomainError("expected a header line 'n m'")
        n, m = int(rows[0][0]), int(rows[0][1])
        if len(rows) - 1 != m:
            raise DomainError(f"header promises {m} edges, found {len(rows) - 1}")
        return cls.of(n, ((int(r[0]), int(r[1])) for r in rows[1:]))


def _induced_degseq(adj, subset) -> tuple[int, ...]:
    degs = [0] * len(subset)
    for i, j in itertools.combinations(range(len(subset)), 2):
        if subset[j] in adj[subset[i]]:
            degs[i] += 1
            degs[j] += 1
    return tuple(sorted(degs))


def count_induced(G: SimpleGraph, pat: Pattern) -> int:
    """Number of vertex subsets of G inducing a copy of the pattern."""
    k = pat.vertex_count
    if k > G.n:
        raise DomainError(f"pattern {pat.value} needs {k} vertices, graph has {G.n}")
    if pat is Pattern.K2:
        return G.m
    adj = G.adjacency()
    target = _PATTERN_DEGSEQ[pat]
    return sum(
        1
        for sub in itertools.combinations(range(G.n), k)
        if _induced_degseq(adj, sub) == target
    )


def count_induced_at_edge(G: SimpleGraph, e: Edge, pat: Pattern) -> int:
    """Induced copies of the pattern whose vertex set contains both endpoints of e.

    e must be an edge of G, so it is automatically a pattern edge of every
    copy counted.
    """
    u, v = _norm_edge(*e)
    if (u, v) not in G.edges:
        raise DomainError(f"({u},{v}) is not an edge of the graph")
    k = pat.vertex_count
    if k > G.n:
        raise DomainError(f"pattern {pat.value} needs {k} vertices, graph has {G.n}")
    if pat is Pattern.K2:
        return 1
    adj = G.adjacency()
    target = _PATTERN_DEGSEQ[pat]
    rest = [w for w in range(G.n) if w != u and w != v]
    return sum(
        1
        for extra in itertools.combinations(rest, k - 2)
        if _induced_degseq(adj, (u, v) + extra) == target
    )


def expected_induced_c4(n: int, p: float) -> float:
    """E[induced 4-cycle count] in G(n,p): 3 C(n,4) p^4 (1-p)^2, exactly."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0,1]")
    if n < 0:
        raise DomainError("negative vertex count")
    return 3.0 * comb(n, 4) * p**4 * (1.0 - p) ** 2


def c4_expectation_weighted(n: int, weight) -> float:
    """Sum over (4-set, pairing) of prod w(cycle edges) * prod (1 - w(diagonals)).

    weight is a callable on normalised pairs.  This is the common core of
    the plant-conditioned and subcube-conditioned expectations.
    """
    total = 0.0
    for sub in itertools.combinations(range(n), 4):
        for cyc, diag in masks.cycle_pairings(sub):
            term = 1.0
            for e in cyc:
                term *= weight(e)
                if term == 0.0:
                    break
            else:
                for e in diag:
                    term *= 1.0 - weight(e)
                total += term
    return total


def conditioned_expectation_c4(plant: SimpleGraph, n: int, p: float) -> float:
    """E[induced 4-cycle count | plant subseteq G(n,p)] for a labelled plant.

    The plant is read as a labelled subgraph of K_n on vertices
    0..plant.n-1; its edges get weight 1, every other pair weight p.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0,1]")
    if plant.n > n:
        raise DomainError(f"plant on {plant.n} vertices does not embed in K_{n}")
    planted = plant.edges
    return c4_expectation_weighted(n, lambda e: 1.0 if e in planted else p)


@dataclass(frozen=True)
class TailOracleResult:
    threshold: float
    probability: float
    graphs_enumerated: int


def exact_tail_probability(n: int, p: float, threshold: float) -> TailOracleResult:
    """Exact P(induced 4-cycle count >= threshold) by full enumeration.

    Sums p^e (1-p)^(C(n,2)-e) over all labelled graphs that qualify; the
    2^C(n,2) budget restricts n to at most 7.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0,1]")
    if n > 7:
        raise BudgetExceededError(f"n={n} exceeds the 2^21 enumeration budget")
    if n < 4 or threshold <= 0:
        prob = 1.0 if threshold <= 0 else 0.0
        return TailOracleResult(threshold, prob, 1 << comb(n, 2))
    counts = masks.c4_counts_all(n)
    weights = masks.graph_probabilities(n, p)
    prob = float(weights[counts >= threshold].sum())
    return TailOracleResult(threshold, min(prob, 1.0), 1 << comb(n, 2))


def max_c4_count(n: int) -> int:
    """Maximum induced 4-cycle count over all graphs on n vertices (n <= 7)."""
    if n > 7:
        raise BudgetExceededError(f"n={n} exceeds the 2^21 enumeration budget")
    if n < 4:
        return 0
    return masks.max_induced_c4(n)


def degree_class_profile(G: SimpleGraph, R: int):
    """Edge masses by the degree class of the lighter endpoint.

    Returns (x, flag): x is a class-indexed vector of length R+2 with slot i
    (1 <= i <= R) holding the number of edges whose minimum endpoint degree
    is i, slot R+1 holding the edges with both endpoints of degree > R, and
    slot 0 unused.  flag is True iff the vertices of degree <= R form an
    independent set, the regime where the classes describe a core graph.
    """
    if R < 2:
        raise DomainError(f"R={R} must be at least 2")
    deg = G.degrees()
    x = np.zeros(R + 2, dtype=float)
    flag = True
    for u, v in G.edges:
        d = min(deg[u], deg[v])
        if d <= R:
            x[d] += 1
        else:
            x[R + 1] += 1
        if deg[u] <= R and deg[v] <= R:
            flag = False
    return x, flag
