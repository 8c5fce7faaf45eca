"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: bad input files -> 1, precondition
violations -> 2, exhausted evaluation budgets -> 3.  Verification failures
(a bound that does not hold) are not exceptions; they are reported through
``BoundReport.passed`` and mapped to exit code 4 by the CLI.
"""


class BernsmoothError(Exception):
    """Base class for all package errors."""


class DomainError(BernsmoothError):
    """An argument lies outside the operation's domain (empty interval, ...)."""


class PreconditionError(BernsmoothError):
    """A documented precondition was violated (named where possible)."""


class SupportViolationError(PreconditionError):
    """A zero of the entire function falls outside the weight's support."""


class EvaluationError(BernsmoothError):
    """A user-supplied function returned NaN or a non-finite value."""


class BudgetExhaustedError(BernsmoothError):
    """The quadrature evaluation budget ran out before reaching the tolerance.

    Carries the best estimate obtained so far.
    """

    def __init__(self, message, best_estimate, error_estimate, evaluations):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
        self.evaluations = evaluations
