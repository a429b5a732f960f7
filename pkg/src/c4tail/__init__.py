"""Upper-tail machinery for induced 4-cycle counts in G(n,p).

Exact counting oracles at desk scale, planting lower bounds, closed-form
rate formulas with phase boundaries, a discrete degree-class variational
solver, and naive mean-field solvers exhibiting the rate gap against the
planting-family bound.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    DomainError,
    InfeasiblePlantError,
    InfeasibleSolutionError,
)
from .graphs import (
    Pattern,
    SimpleGraph,
    TailOracleResult,
    conditioned_expectation_c4,
    count_induced,
    count_induced_at_edge,
    degree_class_profile,
    exact_tail_probability,
    expected_induced_c4,
)
from .subcube import Subcube, codims, intersect, phi_bruteforce, subcube_expectation_c4, supcubes

__all__ = [
    "BudgetExceededError",
    "DomainError",
    "InfeasiblePlantError",
    "InfeasibleSolutionError",
    "Pattern",
    "SimpleGraph",
    "Subcube",
    "TailOracleResult",
    "codims",
    "conditioned_expectation_c4",
    "count_induced",
    "count_induced_at_edge",
    "degree_class_profile",
    "exact_tail_probability",
    "expected_induced_c4",
    "intersect",
    "phi_bruteforce",
    "subcube_expectation_c4",
    "supcubes",
]
