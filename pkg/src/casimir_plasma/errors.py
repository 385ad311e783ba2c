"""Exception hierarchy."""


class CasimirError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CasimirError, ValueError):
    """An input lies outside the domain of the requested operation."""


class UnknownMaterialError(CasimirError, LookupError):
    """No mirror preset with the requested name."""


class UnsupportedInputError(CasimirError, ValueError):
    """The operation is defined, but not for this kind of input."""


class RedirectError(DomainError):
    """The input belongs to a different operation, named in ``target``."""

    def __init__(self, message: str, target: str):
        super().__init__(message)
        self.target = target


class ConvergenceError(CasimirError, ArithmeticError):
    """A quadrature, series or range extension did not reach its tolerance."""

    def __init__(self, message: str, error_estimate: float = float("nan"), **context):
        super().__init__(message)
        self.error_estimate = error_estimate
        self.context = context


class ReportError(CasimirError):
    """A table cannot be rendered or written."""
