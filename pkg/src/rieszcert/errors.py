"""Exception hierarchy shared by every module of the toolkit."""


class NumericError(ArithmeticError):
    """Base class for failures of rigorous or floating evaluation."""


class DomainError(NumericError, ValueError):
    """An argument lies outside the domain where an enclosure is defined."""


class DivisionByZeroInterval(DomainError, ZeroDivisionError):
    """Interval division by a divisor that contains zero."""


class InvalidInterval(NumericError, ValueError):
    """Malformed interval: NaN endpoint or lo > hi."""


class NoSignChange(ValueError):
    """Root bracketing was asked for on an interval without a sign change."""


class ZeroFunction(ValueError):
    """A norm ratio was requested for the zero function."""


class CeilingViolation(RuntimeError):
    """A ratio exceeded its sharp constant; this indicates a defect."""
