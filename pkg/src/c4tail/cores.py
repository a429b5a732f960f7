"""Seed, structured-seed and core predicates, and core extraction.

The combined score of a graph is its induced 4-cycle count plus p^2 times
its induced 2-edge-star-plus-isolated count; at-edge scores restrict both
counts to copies through the edge.  A core is a structured seed in which
every edge carries a minimum share of the score.  Extraction deletes, one
at a time, the lexicographically smallest edge whose removal drops the
score by less than s/e(G0) (the denominator stays the original edge
count), which loses at most s of the score in total.

The cost proxy phi_hat stands in for the optimal-plant cost at the shifted
tolerance; by default it is the closed-form upper bracket from the rates
module, so the predicates are computable at any scale, and callers may
inject the brute-force value at tiny n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import rates
from .errors import BudgetExceededError, DomainError
from .extremal import iso_classes
from .graphs import (
    Pattern,
    SimpleGraph,
    conditioned_expectation_c4,
    count_induced,
    count_induced_at_edge,
    expected_induced_c4,
)


def n_score(G: SimpleGraph, p: float) -> float:
    """Induced 4-cycle count plus p^2 times the star-plus-isolated count."""
    return (
        count_induced(G, Pattern.C4)
        + count_induced(G, Pattern.K12_K1) * p * p
    )


def edge_score(G: SimpleGraph, e, p: float) -> float:
    """The at-edge version of n_score; e must be an edge of G."""
    return (
        count_induced_at_edge(G, e, Pattern.C4)
        + count_induced_at_edge(G, e, Pattern.K12_K1) * p * p
    )


@dataclass(frozen=True)
class CoreParams:
    eps: float
    delta: float
    K: float
    n: int
    p: float
    phi_hat: float | None = None

    def __post_init__(self):
        if not 0.0 < self.eps < self.delta:
            raise DomainError("need 0 < eps < delta")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p={self.p} outside (0,1)")
        if self.K <= 0:
            raise DomainError("K must be positive")
        if self.phi_hat is None:
            object.__setattr__(self, "phi_hat", self.default_phi_hat())
        if self.phi_hat <= 0:
            raise DomainError("phi_hat must be positive")

    def default_phi_hat(self) -> float:
        _, upper = rates.phi_bounds(self.n, self.p, self.delta + self.eps, self.eps)
        return upper

    @property
    def ex(self) -> float:
        return expected_induced_c4(self.n, self.p)

    @property
    def size_cap(self) -> float:
        return self.K * self.phi_hat

    @property
    def edge_threshold(self) -> float:
        return self.eps * self.ex / (2.0 * self.K * self.phi_hat)


def is_seed(G: SimpleGraph, params: CoreParams) -> bool:
    """Size cap plus conditional-expectation condition."""
    if G.m > params.size_cap:
        return False
    cond = conditioned_expectation_c4(G, params.n, params.p)
    return cond >= (1.0 + params.delta - params.eps) * params.ex


def is_structured_seed(G: SimpleGraph, params: CoreParams) -> bool:
    """Size cap plus score condition n_score >= (delta - eps) E[X]."""
    if G.m > params.size_cap:
        return False
    return n_score(G, params.p) >= (params.delta - params.eps) * params.ex


def is_core(G: SimpleGraph, params: CoreParams) -> bool:
    """A structured seed in which every edge clears the at-edge threshold."""
    if not is_structured_seed(G, params):
        return False
    thr = params.edge_threshold
    return all(edge_score(G, e, params.p) >= thr for e in sorted(G.edges))


def extract_core(G: SimpleGraph, s: float, p: float) -> SimpleGraph:
    """Repeatedly delete the smallest edge whose score drop is below s/e(G0).

    The denominator is the original edge count, so the total score loss is
    at most s and every surviving edge has deletion drop >= s/e(G0).
    Negative drops (deleting an edge can create induced copies) always
    qualify.  The empty result is legal.
    """
    if s < 0:
        raise DomainError(f"s={s} must be nonnegative")
    if G.m == 0:
        return G
    cutoff = s / G.m
    current = G
    while current.m > 0:
        score = n_score(current, p)
        victim = None
        for e in sorted(current.edges):
            if score - n_score(current.without_edge(*e), p) < cutoff:
                victim = e
                break
        if victim is None:
            break
        current = current.without_edge(*victim)
    return current


@dataclass(frozen=True)
class CoreReport:
    m: int
    count: int
    v_max: int
    examples: list[SimpleGraph] = field(default_factory=list)
    v_max_bound: float = 0.0
    v_max_bound_satisfied: bool = True

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "count": self.count,
            "v_max": self.v_max,
            "v_max_bound": self.v_max_bound,
            "v_max_bound_satisfied": self.v_max_bound_satisfied,
            "examples": [g.to_text() for g in self.examples],
        }


def enumerate_cores(
    n: int, m: int, params: CoreParams, max_examples: int = 5
) -> CoreReport:
    """Count isomorphism classes of m-edge cores on n vertices.

    v_max is the maximum number of non-isolated vertices over the cores
    found; the report records whether v_max <= m/2 + m^{3/4} holds (a
    diagnostic, not an assertion).
    """
    if n > 8 or m > 12:
        raise BudgetExceededError(
            f"core census budgeted to n<=8, m<=12; requested n={n}, m={m}"
        )
    count = 0
    v_max = 0
    examples: list[SimpleGraph] = []
    for edge_set in iso_classes(n, m).values():
        G = SimpleGraph(n, edge_set)
        if not is_core(G, params):
            continue
        count += 1
        touched = sum(1 for d in G.degrees() if d > 0)
        v_max = max(v_max, touched)
        if len(examples) < max_examples:
            examples.append(G)
    bound = m / 2.0 + m**0.75
    return CoreReport(
        m=m,
        count=count,
        v_max=v_max,
        examples=examples,
        v_max_bound=bound,
        v_max_bound_satisfied=(count == 0) or (v_max <= bound),
    )
