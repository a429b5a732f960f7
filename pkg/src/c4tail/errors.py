"""Exception types shared across the package.

The CLI maps these onto exit codes (domain errors -> 2, budget errors -> 3),
and the HTTP service maps them onto 4xx responses.
"""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the desk-scale budget."""


class InfeasiblePlantError(DomainError):
    """The requested planted family has a side smaller than one vertex."""


class InfeasibleSolutionError(RuntimeError):
    """A solver found no feasible point; the best infeasible iterate is attached."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
