"""Exception types shared across the package."""


class ScattermetError(Exception):
    """Base class for all domain errors raised by this package."""


class OddModeCount(ScattermetError):
    """An operation that pairs modes was given an odd mode count."""


class UnsupportedSize(ScattermetError):
    """Requested a construction at a size the recursion does not cover."""


class DomainError(ScattermetError):
    """Arguments outside the mathematical domain of an operation."""


class TooLarge(ScattermetError):
    """Request exceeds a hard resource guard; shrink the problem."""


class NumericalError(ScattermetError):
    """A numerical procedure (fit, extrapolation) failed to converge."""


class LimitPoint(ScattermetError):
    """Evaluation requested exactly at a removable singularity (phi = 0)."""


class AcceptanceTooLow(ScattermetError):
    """Rejection sampling exhausted its attempt budget."""


class NotOrthogonal(ScattermetError):
    """Matrix handed to the decomposer is not orthogonal within tolerance."""
