"""Exception hierarchy shared across the package.

Split along the three failure families the command line maps to distinct
exit codes: user/configuration mistakes, numerical breakdowns, and
violations of the structural hypotheses a problem must satisfy.
"""

from __future__ import annotations


class KhessError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(KhessError):
    """Malformed configuration or unusable command-line input."""


class ExpressionSyntaxError(ConfigError, ValueError):
    """Unparseable function expression.

    Attributes
    ----------
    offset : int
        Byte offset into the source string where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ExpressionSyntaxError):
    """Variable or function name not available in this context."""


class EvaluationDomainError(KhessError, ArithmeticError):
    """A function produced a non-finite or out-of-codomain value.

    Attributes
    ----------
    where : tuple
        Argument values at which evaluation failed.
    """

    def __init__(self, message: str, where: tuple = ()):
        super().__init__(message)
        self.where = where


class HypothesisViolationError(KhessError):
    """Problem data breaks a structural requirement (signs, monotonicity,
    positive growth denominator)."""


class NumericalFailureError(KhessError):
    """Base class for breakdowns of the numerical machinery."""


class QuadratureToleranceError(NumericalFailureError):
    """Adaptive integration hit its subdivision cap before reaching the
    requested tolerance.  Carries the best value seen so far."""

    def __init__(self, message: str, best_value: float, error_estimate: float):
        super().__init__(message)
        self.best_value = best_value
        self.error_estimate = error_estimate


class KernelOverflowError(NumericalFailureError):
    """Slope-kernel evaluation left floating-point range.

    Attributes
    ----------
    radius : float
        Radial position at which the overflow occurred.
    exponent : float
        Accumulated convection exponent there.
    """

    def __init__(self, message: str, radius: float, exponent: float):
        super().__init__(message)
        self.radius = radius
        self.exponent = exponent


class TableRangeError(NumericalFailureError):
    """A lookup fell outside the range a monotone table covers.

    ``suggested_s_max`` hints at a table extension when one could help;
    ``None`` means the underlying integral is bounded and no extension
    can reach the requested value.
    """

    def __init__(self, message: str, suggested_s_max: float | None = None):
        super().__init__(message)
        self.suggested_s_max = suggested_s_max


class BlowUpError(NumericalFailureError):
    """Iterates exceeded the blow-up ceiling: finite-radius blow-up suspected.

    Attributes
    ----------
    radius : float
        Node at which the ceiling was first exceeded.
    ceiling : float
        The configured ceiling.
    """

    def __init__(self, message: str, radius: float, ceiling: float):
        super().__init__(message)
        self.radius = radius
        self.ceiling = ceiling


class NotConvergedError(NumericalFailureError):
    """Raised only where a caller demands a converged result."""
