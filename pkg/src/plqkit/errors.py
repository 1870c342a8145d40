"""Exception hierarchy shared by all plqkit modules."""


class PlqError(Exception):
    """Base class for all plqkit errors."""


class LengthMismatchError(PlqError):
    """Breakpoint and piece lists do not differ in length by exactly one."""


class NonIncreasingBreakpointsError(PlqError):
    """Breakpoints are not strictly increasing."""


class InteriorInfinityError(PlqError):
    """An interior breakpoint is infinite; only the two endpoints may be."""


class DiscontinuousInteriorError(PlqError):
    """Adjacent pieces disagree at an interior breakpoint.

    Carries the offending breakpoint and the jump size.
    """

    def __init__(self, breakpoint: float, jump: float):
        self.breakpoint = breakpoint
        self.jump = jump
        super().__init__(
            f"discontinuity at x={breakpoint!r}: jump {jump!r}"
        )


class DomainMismatchError(PlqError):
    """Two functions do not share the same domain."""


class EmptyIntervalError(PlqError):
    """Interval has nonpositive length or a non-finite endpoint."""


class OutsideDomainError(PlqError):
    """Requested point (or one-sided neighborhood) lies outside the domain."""


class HypothesisNotMetError(PlqError):
    """The breakpoint-extension transform does not apply to this input."""


class InfeasibleInputError(PlqError):
    """No convex function lies at finite distance from the input.

    ``classification`` holds the feasibility class that triggered the error
    when one was detected.
    """

    def __init__(self, message: str, classification=None):
        self.classification = classification
        super().__init__(message)


class DimensionMismatchError(PlqError):
    """Matrix/vector dimensions of a QP problem or solution disagree."""


class TooLargeError(PlqError):
    """Exhaustive enumeration was requested on a search space that is too big."""


class NotASplineError(PlqError):
    """Input is not continuously differentiable at its interior breakpoints."""


class MalformedDocumentError(PlqError):
    """A PLQ document failed to parse; carries a locus when known."""

    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        super().__init__(message if locus is None else f"{message} (at {locus})")


class BadRangeError(PlqError):
    """Sampling range is empty or the sample count is too small."""
