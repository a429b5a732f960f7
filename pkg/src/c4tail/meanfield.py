"""Naive mean-field variational problem for the induced 4-cycle upper tail.

The variable is a vector q of independent edge probabilities.  The
constraint functional is the exact inhomogeneous expectation

    E(q) = sum over representative 4-cycles of
           q_xy q_yz q_zw q_wx (1 - q_xz)(1 - q_yw),

with one representative per (4-subset, cycle pairing), 3 C(n,4) terms in
total, matching the homogeneous normalisation E(p,...,p) = 3 C(n,4) p^4
(1-p)^2.  E and its exact gradient are evaluated through symmetric-matrix
contractions with the degenerate (repeated-vertex) walks subtracted, so a
single evaluation is O(n^4) BLAS work rather than a 3 C(n,4) Python loop.

Two solvers minimise the total edge entropy sum I_p(q_e) subject to
E(q) >= (1+delta) E[X]: a block ansatz (weight w on a complete bipartite
block, p elsewhere) searched exhaustively over block shapes, and a general
projected-gradient solver with penalty continuation warm-started from the
ansatz.  Entries are clipped to [p, 1]: raising any entry below p to p
lowers the entropy and nearly preserves the constraint, so the search
space loses nothing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import masks, rates
from .errors import BudgetExceededError, DomainError, InfeasibleSolutionError
from .graphs import expected_induced_c4


def vector_to_matrix(q: np.ndarray, n: int) -> np.ndarray:
    if len(q) != comb(n, 2):
        raise DomainError(f"q has length {len(q)}, expected C({n},2)")
    Q = np.zeros((n, n))
    for idx, (u, v) in enumerate(masks.pair_list(n)):
        Q[u, v] = Q[v, u] = q[idx]
    return Q


def matrix_to_vector(Q: np.ndarray) -> np.ndarray:
    n = Q.shape[0]
    return np.array([Q[u, v] for u, v in masks.pair_list(n)])


def _cycle_sums(Q: np.ndarray):
    """(S0, S1, S2): ordered-distinct-4-tuple sums of the cycle product,
    cycle times one diagonal, and the full 6-edge product."""
    A2 = Q @ Q
    B = Q * Q
    B2 = B @ B
    d2 = B.sum(axis=1)
    F = (B * B).sum()
    S0 = float(np.trace(A2 @ A2)) - 2.0 * float(d2 @ d2) + float(F)
    S1 = float((Q * (A2 * A2 - B2)).sum())
    n = Q.shape[0]
    T = (Q[:, None, :] * Q[None, :, :]).reshape(n * n, n) @ Q
    GK4 = (T.reshape(n, n, n) * Q[:, None, :] * Q[None, :, :]).sum(axis=2)
    S2 = float((Q * GK4).sum())
    return S0, S1, S2, A2, B, B2, d2, GK4


def inhomogeneous_c4_expectation(q: np.ndarray, n: int) -> float:
    """Exact expected induced 4-cycle count under independent edge
    probabilities q (edge-index order)."""
    if n < 4:
        return 0.0
    Q = vector_to_matrix(np.asarray(q, dtype=float), n)
    S0, S1, S2, *_ = _cycle_sums(Q)
    return (S0 - 2.0 * S1 + S2) / 8.0


def c4_expectation_gradient(q: np.ndarray, n: int) -> np.ndarray:
    """Exact gradient of the inhomogeneous expectation in each edge weight.

    The expectation is multilinear, so each partial derivative is exact;
    the matrix-contraction derivatives mirror the value computation.
    """
    q = np.asarray(q, dtype=float)
    if n < 4:
        return np.zeros_like(q)
    Q = vector_to_matrix(q, n)
    A2 = Q @ Q
    B = Q * Q
    B2 = B @ B
    d2 = B.sum(axis=1)
    Q3 = A2 @ Q
    G0 = 8.0 * Q3 - 8.0 * Q * (d2[:, None] + d2[None, :]) + 8.0 * Q**3
    C = Q * A2
    G1 = (
        2.0 * (A2 * A2 - B2)
        + 4.0 * (C @ Q + Q @ C)
        - 4.0 * Q * (Q @ B + B @ Q)
    )
    n_ = Q.shape[0]
    T = (Q[:, None, :] * Q[None, :, :]).reshape(n_ * n_, n_) @ Q
    GK4 = (T.reshape(n_, n_, n_) * Q[:, None, :] * Q[None, :, :]).sum(axis=2)
    G2 = 12.0 * GK4
    G = (G0 - 2.0 * G1 + G2) / 8.0
    return matrix_to_vector(G)


def block_ansatz_expectation(n: int, a: int, b: int, w: float, p: float) -> float:
    """Exact expectation when the a-by-b bipartite block pairs have weight w
    and every other pair weight p.

    Vertices have three types (block side A, block side B, outside); the
    expectation is the ordered-4-tuple sum grouped by type pattern with
    falling-factorial counts, 3^4 patterns in all, so the block search is
    O(1) per candidate.
    """
    if a + b > n:
        raise DomainError(f"block {a}+{b} exceeds n={n}")
    sizes = (a, b, n - a - b)

    def weight(t1, t2):
        return w if (t1, t2) in ((0, 1), (1, 0)) else p

    total = 0.0
    for pattern in itertools.product(range(3), repeat=4):
        count = 1.0
        used = [0, 0, 0]
        for t in pattern:
            count *= sizes[t] - used[t]
            used[t] += 1
        if count == 0.0:
            continue
        t1, t2, t3, t4 = pattern
        term = (
            weight(t1, t2)
            * weight(t2, t3)
            * weight(t3, t4)
            * weight(t4, t1)
            * (1.0 - weight(t1, t3))
            * (1.0 - weight(t2, t4))
        )
        total += count * term
    return total / 8.0


def block_vector(n: int, a: int, b: int, w: float, p: float) -> np.ndarray:
    """Edge-weight vector of the block ansatz."""
    q = np.full(comb(n, 2), float(p))
    for i in range(a):
        for j in range(b):
            q[masks.edge_index(n, i, a + j)] = w
    return q


def entropy_cost(q: np.ndarray, p: float) -> float:
    """Total relative entropy sum_e I_p(q_e)."""
    q = np.asarray(q, dtype=float)
    out = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(q > 0.0, q * np.log(q / p), 0.0)
        t2 = np.where(q < 1.0, (1.0 - q) * np.log((1.0 - q) / (1.0 - p)), 0.0)
    out = float(np.sum(t1 + t2))
    return out


@dataclass(frozen=True)
class MeanfieldSolution:
    q_star: np.ndarray
    cost: float
    constraint_value: float
    method: str  # ANSATZ | GENERAL
    meta: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "cost": self.cost,
            "constraint_value": self.constraint_value,
            "method": self.method,
            "meta": self.meta,
        }


def solve_ansatz(n: int, p: float, delta: float) -> MeanfieldSolution:
    """Cheapest feasible block: exhaustive (a, b) grid, boundary search in w.

    The cost a*b*I_p(w) is increasing in w above p, so the cheapest
    feasible weight per block sits on the feasibility boundary; the
    bisection keeps its upper end feasible throughout, so the block it
    returns is feasible even where the exact expectation is not monotone
    in w.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p} outside (0,1)")
    target = (1.0 + delta) * expected_induced_c4(n, p)
    base = block_ansatz_expectation(n, 0, 0, p, p)
    if base >= target:
        q = np.full(comb(n, 2), p)
        return MeanfieldSolution(q, 0.0, base, "ANSATZ", {"a": 0, "b": 0, "w": p})

    ex = expected_induced_c4(n, p)
    m0 = rates.plant_mass(0, ex, delta, 0.0)
    a_hi = min(n - 1, int(2.0 * math.sqrt(max(m0, 1.0))) + 3)
    best = None
    for a in range(1, a_hi + 1):
        b_hi = min(n - a, int(6.0 * max(m0, 1.0) / a) + 3)
        for b in range(a, b_hi + 1):
            if block_ansatz_expectation(n, a, b, 1.0, p) < target:
                continue
            lo, hi = p, 1.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if block_ansatz_expectation(n, a, b, mid, p) >= target:
                    hi = mid
                else:
                    lo = mid
            w = hi
            cost = a * b * rates.relative_entropy(w, p)
            if best is None or cost < best[0]:
                best = (cost, a, b, w)
    if best is None:
        raise InfeasibleSolutionError(
            f"no feasible block ansatz at n={n}, p={p}, delta={delta}"
        )
    cost, a, b, w = best
    q = block_vector(n, a, b, w, p)
    value = inhomogeneous_c4_expectation(q, n)
    return MeanfieldSolution(q, cost, value, "ANSATZ", {"a": a, "b": b, "w": w})


def _entropy_gradient(q: np.ndarray, p: float) -> np.ndarray:
    qc = np.clip(q, 1e-15, 1.0 - 1e-15)
    return np.log(qc / p) - np.log((1.0 - qc) / (1.0 - p))


def solve_general(
    n: int, p: float, delta: float, seed: int = 0, max_iter: int = 400
) -> MeanfieldSolution:
    """Projected-gradient minimisation of the entropy with a quadratic
    penalty on the constraint, multi-started from the ansatz point and
    seeded random block perturbations; the penalty weight is multiplied by
    10 until the returned point is feasible to 1e-6 relative.

    Deterministic for a fixed seed.  Raises with the best infeasible
    iterate attached when no feasible point is found.
    """
    if n > 120:
        raise BudgetExceededError(f"n={n} exceeds the dense-vector budget (120)")
    target = (1.0 + delta) * expected_induced_c4(n, p)
    feas_tol = 1.0 - 1e-6

    def expectation(q):
        return inhomogeneous_c4_expectation(q, n)

    if expectation(np.full(comb(n, 2), p)) >= target:
        q = np.full(comb(n, 2), p)
        return MeanfieldSolution(q, 0.0, expectation(q), "GENERAL", {"starts": 0})

    ansatz = solve_ansatz(n, p, delta)
    rng = np.random.default_rng(seed)
    starts = [np.array(ansatz.q_star)]
    for _ in range(2):
        jitter = rng.random(len(ansatz.q_star))
        q0 = np.clip(ansatz.q_star * (0.85 + 0.3 * jitter), p, 1.0)
        starts.append(q0)

    best_feasible = None
    best_any = None
    upper_clip = 1.0 - 1e-9
    for q0 in starts:
        q = np.clip(q0, p, upper_clip)
        rho = max(1.0, entropy_cost(q, p)) / max(target, 1.0) ** 2
        for _round in range(8):
            eta = None
            for _it in range(max_iter):
                e_val = expectation(q)
                gap = max(0.0, target - e_val)
                cost = entropy_cost(q, p)
                fval = cost + rho * gap * gap
                grad = _entropy_gradient(q, p)
                if gap > 0.0:
                    grad = grad - 2.0 * rho * gap * c4_expectation_gradient(q, n)
                gnorm = float(np.linalg.norm(grad))
                if gnorm < 1e-12:
                    break
                if eta is None:
                    eta = 0.1 * max(1e-6, float(np.max(q))) / gnorm
                improved = False
                for _bt in range(40):
                    q_new = np.clip(q - eta * grad, p, upper_clip)
                    e_new = expectation(q_new)
                    g_new = max(0.0, target - e_new)
                    f_new = entropy_cost(q_new, p) + rho * g_new * g_new
                    if f_new < fval - 1e-15:
                        improved = True
                        break
                    eta *= 0.5
                if not improved:
                    break
                step = float(np.linalg.norm(q_new - q))
                q = q_new
                eta *= 1.5
                if (
                    e_new >= target * feas_tol
                    and abs(f_new - fval) <= 1e-10 * max(1.0, abs(fval))
                ):
                    break
                if step < 1e-14:
                    break
            e_val = expectation(q)
            cost = entropy_cost(q, p)
            if best_any is None or cost < best_any[0]:
                best_any = (cost, q.copy(), e_val)
            if e_val >= target * feas_tol:
                if best_feasible is None or cost < best_feasible[0]:
                    best_feasible = (cost, q.copy(), e_val)
                break
            rho *= 10.0

    # the ansatz point itself is always a feasible candidate
    a_val = ansatz.constraint_value
    if a_val >= target * feas_tol and (
        best_feasible is None or ansatz.cost < best_feasible[0]
    ):
        best_feasible = (ansatz.cost, np.array(ansatz.q_star), a_val)

    if best_feasible is None:
        raise InfeasibleSolutionError(
            f"no feasible point found at n={n}, p={p}, delta={delta}",
            best=best_any,
        )
    cost, q, e_val = best_feasible
    return MeanfieldSolution(
        q, cost, e_val, "GENERAL", {"starts": len(starts), "seed": seed}
    )


def gap_report(n: int, p: float, delta: float, use_solver: bool = False) -> dict:
    """Mean-field rate vs family-planting rate, normalised.

    In SPARSE_K the mean-field rate is sqrt(delta/2) (or the general
    solver's normalised cost when use_solver is set) while the family bound
    is rho_k sqrt(delta/2); their ratio rho_k < 1 is the no-mean-field gap.
    SPARSE_DENSE reports ratio 1 by convention.
    """
    regime = rates.regime_classify(n, p)
    base = math.sqrt(delta / 2.0)
    if regime.label == "SPARSE_DENSE":
        return {
            "regime": regime.as_dict(),
            "meanfield_norm": base,
            "family_norm": base,
            "ratio": 1.0,
        }
    if regime.label != "SPARSE_K":
        raise DomainError(f"regime {regime.label} has no mean-field gap report")
    if use_solver:
        sol = solve_general(n, p, delta)
        mf = sol.cost / (n * n * p * p * math.log(1.0 / p))
    else:
        mf = base
    family = rates.rho_factor(n, p, regime.k) * base
    return {
        "regime": regime.as_dict(),
        "meanfield_norm": mf,
        "family_norm": family,
        "ratio": family / mf,
    }


def entropy_asymptotics_check(p: float, grid_points: int = 24) -> dict:
    """Desk-scale diagnostics for the entropy function I_p near p.

    small_x_ratio: I_p(p+x) * 2p / x^2 at x = p/100 (quadratic regime).
    large_x_ratio: I_p(p+x) / (x log(x/p)) at x = 100p; this ratio
    approaches 1 only like 1 - 1/log(x/p), so it sits well below 1 at any
    x bounded away from 1 (large_x_ratio_at_half shows the same ratio at
    x = 0.5 for contrast).  minorant_violations counts failures of
    I_p(p+x) >= x^2 I_p(p+b) / b^2 on an (x, b) grid with
    b <= 1 - p - 1/log(1/p).
    """
    if not 0.0 < p <= 0.01:
        raise DomainError(f"p={p} outside (0, 0.01]")
    x_small = p / 100.0
    small_ratio = (
        rates.relative_entropy(p + x_small, p) * 2.0 * p / (x_small * x_small)
    )
    x_large = 100.0 * p
    if x_large > 1.0 - p:
        raise DomainError(f"x=100p={x_large} exceeds 1-p")
    large_ratio = rates.relative_entropy(p + x_large, p) / (
        x_large * math.log(x_large / p)
    )
    large_ratio_half = rates.relative_entropy(p + 0.5, p) / (0.5 * math.log(0.5 / p))
    b_cap = 1.0 - p - 1.0 / math.log(1.0 / p)
    violations = 0
    checked = 0
    bs = np.geomspace(10.0 * p, b_cap, grid_points)
    for b in bs:
        ib = rates.relative_entropy(p + b, p)
        for x in np.linspace(0.0, b, grid_points):
            checked += 1
            if rates.relative_entropy(p + x, p) < x * x * ib / (b * b) - 1e-14:
                violations += 1
    return {
        "p": p,
        "small_x_ratio": small_ratio,
        "large_x_ratio": large_ratio,
        "large_x_ratio_at_half": large_ratio_half,
        "minorant_violations": violations,
        "minorant_checked": checked,
    }
