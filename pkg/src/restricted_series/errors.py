"""Exception hierarchy shared by all modules."""


class RestrictedSeriesError(Exception):
    """Base class for every error raised by this package."""


class HypothesisFailure(RestrictedSeriesError):
    """A mathematical precondition on the inputs does not hold.

    The CLI maps this family to exit code 2. ``reason`` is a short
    machine-readable slug.
    """

    def __init__(self, reason: str, message: str | None = None):
        self.reason = reason
        super().__init__(message or reason)


class NotApplicable(HypothesisFailure):
    pass


class NotSpanning(HypothesisFailure):
    def __init__(self, message: str | None = None):
        super().__init__("half-plane-contained", message)


class InvalidZeta(HypothesisFailure):
    def __init__(self, message: str | None = None):
        super().__init__("invalid-zeta", message)


class HorizonExhausted(RestrictedSeriesError):
    """No exponent within the horizon cap reaches the requested accuracy."""


class RegionTooThin(RestrictedSeriesError):
    """No admissible evaluation point could be located in the region."""


class VerificationFailed(RestrictedSeriesError):
    """An internal self-check failed; indicates a bug, not bad input."""


class BudgetExceeded(RestrictedSeriesError):
    """An exhaustive search would exceed its enumeration budget."""
