"""Exception hierarchy shared across the package.

Every error that can surface through the service or the CLI carries a
stable ``code`` string so that front ends can map it to HTTP statuses and
exit codes without string-matching messages.
"""

from __future__ import annotations


class RootSeriesError(Exception):
    """Base class for all package errors."""

    code = "error"


class ExpressionSyntaxError(RootSeriesError):
    """Malformed expression text. Carries the offending position."""

    code = "syntax_error"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(ExpressionSyntaxError):
    """Identifier other than ``z``, ``exp`` or ``ln``."""

    code = "unknown_symbol"

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown symbol '{name}'", position)
        self.name = name


class DomainError(RootSeriesError):
    """Evaluation left the domain of the expression."""

    code = "domain_error"

    DIVISION_BY_ZERO = "DivisionByZero"
    LOG_NON_POSITIVE = "LogNonPositive"
    FRACTIONAL_POWER_OF_NEGATIVE = "FractionalPowerOfNegative"

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind

    @classmethod
    def division_by_zero(cls, message: str = "division by zero") -> "DomainError":
        return cls(cls.DIVISION_BY_ZERO, message)

    @classmethod
    def log_non_positive(cls, message: str = "logarithm of a non-positive value") -> "DomainError":
        return cls(cls.LOG_NON_POSITIVE, message)

    @classmethod
    def fractional_power_of_negative(
        cls, message: str = "fractional power of a negative value"
    ) -> "DomainError":
        return cls(cls.FRACTIONAL_POWER_OF_NEGATIVE, message)


class DivisionByZeroLeadingCoefficient(DomainError):
    """Jet division where the divisor's constant term is zero."""

    def __init__(self):
        super().__init__(self.DIVISION_BY_ZERO, "jet division by zero leading coefficient")


class LogNonPositiveLeadingCoefficient(DomainError):
    """Jet logarithm where the constant term is not positive."""

    def __init__(self):
        super().__init__(self.LOG_NON_POSITIVE, "jet logarithm of non-positive leading coefficient")


class NotReversibleError(RootSeriesError):
    """The anchor is a critical point: Z'(v) = 0, so the inverse-function
    derivative is undefined and the series cannot be formed."""

    code = "not_reversible"

    def __init__(self, message: str = "derivative vanishes at the anchor", round_index: int | None = None):
        if round_index is not None:
            message = f"{message} (refinement round {round_index})"
        super().__init__(message)
        self.round_index = round_index


class ExactModeError(RootSeriesError):
    """Exact rational arithmetic was requested but is impossible for the
    given inputs (decimal anchor, transcendental node, fractional power)."""

    code = "exact_mode_unavailable"


class UsageError(RootSeriesError):
    """Malformed request values (bad number literal, missing parameter)."""

    code = "usage_error"


class NoConvergenceError(RootSeriesError):
    """An iterative oracle ran out of iterations."""

    code = "no_convergence"

    def __init__(self, message: str, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class DerivativeVanishedError(RootSeriesError):
    """Newton iteration hit a point with zero derivative."""

    code = "derivative_vanished"

    def __init__(self, iterate):
        super().__init__("derivative vanished during Newton iteration")
        self.iterate = iterate


class NoSignChangeError(RootSeriesError):
    """Bisection bracket does not straddle a root."""

    code = "no_sign_change"
