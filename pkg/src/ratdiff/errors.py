"""Exception hierarchy shared by all modules."""


class RatDiffError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(RatDiffError, ZeroDivisionError):
    pass


class NonFiniteValue(RatDiffError, ValueError):
    """A float input was NaN or infinite."""


class CoefficientIndexOutOfRange(RatDiffError, IndexError):
    pass


class InvalidCoefficient(RatDiffError, ValueError):
    """A coefficient sequence contained a zero (coefficients must be nonzero)."""


class InvalidInitialConditions(RatDiffError, ValueError):
    pass


class ZeroTermInTrajectory(RatDiffError, ValueError):
    pass


class ZeroInvariant(RatDiffError, ZeroDivisionError):
    """An invariant term vanished where it is used as a divisor or a log argument."""


class ZeroDenominatorBracket(RatDiffError, ZeroDivisionError):
    pass


class OmegaUndefined(RatDiffError, ValueError):
    """The right-hand side of the recurrence cannot be evaluated at a point."""


class ZeroArgument(RatDiffError, ValueError):
    pass


class TrajectoryTooShort(RatDiffError, ValueError):
    pass


class ForbiddenOrbit(RatDiffError):
    """An orbit met the forbidden set before the requested length."""

    def __init__(self, index, cause):
        super().__init__(f"orbit hits the forbidden set at u-index {index} ({cause})")
        self.index = index
        self.cause = cause


class ConfigError(RatDiffError, ValueError):
    """Bad command-line or config-file input; ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
