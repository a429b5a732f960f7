"""Exhaustive extremal oracles and closed-form count bounds.

Isomorphism classes are generated bottom-up: the classes with m+1 edges are
the canonical forms of single-edge extensions of the classes with m edges.
The canonical form of a labelled graph is the minimum upper-triangle
bitstring over the vertex orderings that sort a colour refinement of the
degree partition, so only products of within-class permutations are tried;
that keeps n <= 9 tractable without external dependencies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .errors import BudgetExceededError, DomainError
from .graphs import Pattern, SimpleGraph, count_induced


def _pair_index_table(n: int):
    tab = [[0] * n for _ in range(n)]
    idx = 0
    for u in range(n):
        for v in range(u + 1, n):
            tab[u][v] = tab[v][u] = idx
            idx += 1
    return tab


def _refined_colors(n: int, adj) -> list[int]:
    colors = [len(adj[v]) for v in range(n)]
    for _ in range(n):
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(n)
        ]
        palette = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [palette[sigs[v]] for v in range(n)]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new
    return colors


def canonical_key(n: int, edges) -> int:
    """Minimum adjacency bitstring over colour-respecting vertex orderings."""
    edges = list(edges)
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    colors = _refined_colors(n, adj)
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(colors[v], []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    tab = _pair_index_table(n)
    pos = [0] * n
    best = None
    for arrangement in itertools.product(
        *(itertools.permutations(block) for block in blocks)
    ):
        i = 0
        for block in arrangement:
            for v in block:
                pos[v] = i
                i += 1
        key = 0
        for u, v in edges:
            key |= 1 << tab[pos[u]][pos[v]]
        if best is None or key < best:
            best = key
    return best if best is not None else 0


_LEVELS: dict[int, list[dict[int, frozenset]]] = {}

# (n, max edges) pairs kept within a small interactive budget.
_EDGE_BUDGET = {8: 18, 9: 12}


def _check_budget(n: int, m: int):
    if n > 9:
        raise BudgetExceededError(f"n={n} exceeds the n<=9 enumeration budget")
    cap = _EDGE_BUDGET.get(n)
    if cap is not None and m > cap:
        raise BudgetExceededError(
            f"enumeration at n={n} is budgeted to m<={cap}, requested m={m}"
        )


def iso_classes(n: int, m: int) -> dict[int, frozenset]:
    """Canonical-key -> edge-set for every isomorphism class with m edges."""
    _check_budget(n, m)
    if m > comb(n, 2):
        return {}
    levels = _LEVELS.setdefault(n, [{canonical_key(n, ()): frozenset()}])
    while len(levels) <= m:
        nxt: dict[int, frozenset] = {}
        for edge_set in levels[-1].values():
            for e in itertools.combinations(range(n), 2):
                if e in edge_set:
                    continue
                new_edges = edge_set | {e}
                key = canonical_key(n, new_edges)
                if key not in nxt:
                    nxt[key] = frozenset(new_edges)
        levels.append(nxt)
    return levels[m]


def enumerate_graphs(n: int, m: int, min_degree: int = 0):
    """One representative per isomorphism class of n-vertex m-edge graphs
    with minimum degree >= min_degree."""
    for edge_set in iso_classes(n, m).values():
        G = SimpleGraph(n, edge_set)
        if G.min_degree() >= min_degree:
            yield G


@dataclass(frozen=True)
class ExtremalRecord:
    n: int
    m: int
    max_count: int
    witness: SimpleGraph


def max_induced_c4(n: int, m: int, min_degree: int = 0) -> ExtremalRecord:
    """Maximum induced 4-cycle count over the enumerated class, with witness."""
    best = None
    for G in enumerate_graphs(n, m, min_degree):
        c = count_induced(G, Pattern.C4)
        if best is None or c > best[0]:
            best = (c, G)
    if best is None:
        raise DomainError(
            f"no graphs with n={n}, m={m}, min degree >= {min_degree}"
        )
    return ExtremalRecord(n, m, best[0], best[1])


def bound_inducibility(n: int, m: int) -> float:
    """Upper bound m(m-n+1)/4 on the induced 4-cycle count of any n-vertex
    m-edge graph with minimum degree 2; sharp on complete bipartite graphs."""
    if m <= 3:
        raise DomainError(f"m={m} must exceed 3")
    return m * (m - n + 1) / 4.0


def bound_k12k1(n: int, m: int) -> float:
    """Upper bound m n^2 / 8 on the induced 2-edge-star-plus-isolated count."""
    if m > comb(n, 2):
        raise DomainError(f"m={m} exceeds C({n},2)")
    return m * n * n / 8.0


def degree_class_c4_bound(
    G: SimpleGraph, R: int, m2_proxy: float | None = None, eps: float | None = None
) -> float:
    """Degree-class upper bound on the induced 4-cycle count of G.

    Evaluates, on the profile x of G,

        sum_{i=2..R} (x_i/i) C(i,2) (sum_{i<j<=R} x_j/j + x_i/(2i))
        + sum_{i=2..R} x_i e(G) (i-1)/R  +  x_{>R}^2 / 4.

    Requires the low-degree vertices (degree <= R) to be independent, the
    regime where the classes partition the edges.  Passing m2_proxy and eps
    replaces the middle term's e(G)/R with eps*m2_proxy, the relaxation used
    by the mass-vector objective; it upper-bounds the default form whenever
    e(G) <= R*eps*m2_proxy.
    """
    from .graphs import degree_class_profile

    x, flag = degree_class_profile(G, R)
    if not flag:
        deg = G.degrees()
        bad = next(
            (u, v) for u, v in G.edges if deg[u] <= R and deg[v] <= R
        )
        raise DomainError(
            f"low-degree vertices are not independent: edge {bad} joins two "
            f"vertices of degree <= {R}"
        )
    per_edge = (
        eps * m2_proxy
        if (m2_proxy is not None and eps is not None)
        else G.m / R
    )
    total = x[R + 1] ** 2 / 4.0
    for i in range(2, R + 1):
        tail = sum(x[j] / j for j in range(i + 1, R + 1))
        total += (x[i] / i) * comb(i, 2) * (tail + x[i] / (2 * i))
        total += x[i] * per_edge * (i - 1)
    return total
