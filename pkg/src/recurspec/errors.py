"""Exception types shared across the package.

The CLI maps each family to an exit code: ``ValidationError`` -> 2,
``HypothesisError`` -> 3, ``NumericalError`` -> 4.
"""


class RecurSpecError(Exception):
    """Base class for all package errors."""


class ValidationError(RecurSpecError, ValueError):
    """Malformed input: bad shapes, out-of-range indices, non-stochastic rows."""


class HypothesisError(RecurSpecError):
    """A precondition of the bounds does not hold for the given input."""

    reason = "hypothesis"


class SingularError(HypothesisError):
    reason = "zero"


class IllConditionedError(HypothesisError):
    reason = "ill-conditioned"

    def __init__(self, message, sep_min=None):
        super().__init__(message)
        self.sep_min = sep_min


class ReducibleChainError(HypothesisError):
    reason = "reducible"


class PeriodicChainError(HypothesisError):
    reason = "periodic"

    def __init__(self, message, period=None):
        super().__init__(message)
        self.period = period


class RepeatedEigenvalueError(HypothesisError):
    reason = "repeated-eigenvalue"


class ZeroEigenvalueError(HypothesisError):
    reason = "zero-eigenvalue"


class DominantEigenvalueError(HypothesisError):
    reason = "dominant-eigenvalue"


class NumericalError(RecurSpecError, ArithmeticError):
    """An iteration failed to converge or a residual check failed."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
