"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input problems exit with 2, numerical
problems exit with 3.
"""


class HardyLambError(Exception):
    """Base class for all package errors."""

    kind = "error"


class InvalidInput(HardyLambError, ValueError):
    kind = "invalid-input"


class DomainError(InvalidInput):
    """Argument outside the supported evaluation range."""

    kind = "domain-error"


class InvalidParams(InvalidInput):
    """Parameter triple (or p, r) outside a statement's validity set."""

    kind = "invalid-params"


class NumericalFailure(HardyLambError, ArithmeticError):
    kind = "numerical-failure"

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SearchFailure(NumericalFailure):
    kind = "search-failure"


class InternalError(NumericalFailure):
    kind = "internal-error"


class ContinuationFailure(NumericalFailure):
    kind = "continuation-failure"


class SingularPath(ContinuationFailure):
    kind = "singular-path"


class AccuracyFailure(NumericalFailure):
    """Quadrature did not reach the requested tolerance.

    ``partial`` holds the best :class:`~hardylamb.quadrature.IntegralResult`.
    """

    kind = "accuracy-failure"
