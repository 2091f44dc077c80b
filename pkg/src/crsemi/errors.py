"""Exception hierarchy shared across the package."""


class CRSError(Exception):
    """Base class for every error raised by this package."""


class NotCoprime(CRSError, ValueError):
    pass


class NotUnit(CRSError, ValueError):
    pass


class BadModulus(CRSError, ValueError):
    pass


class NotSquarefree(BadModulus):
    pass


class EmptyComponent(CRSError, ValueError):
    pass


class NotInComponent(CRSError, ValueError):
    pass


class NotSubset(CRSError, ValueError):
    pass


class NotDivisor(CRSError, ValueError):
    pass


class NotFound(CRSError, LookupError):
    pass


class NoSuitableK(CRSError, ValueError):
    pass


class NotAMimic(CRSError, ValueError):
    pass


class IndexMismatch(CRSError, ValueError):
    pass


class CostCapExceeded(CRSError, RuntimeError):
    """Raised when an enumeration would exceed the configured work cap."""

    def __init__(self, cost: int, cap: int, what: str = "enumeration"):
        super().__init__(f"{what} needs ~{cost} steps, cap is {cap} (set CRS_COST_CAP to override)")
        self.cost = cost
        self.cap = cap


class FormatError(CRSError, ValueError):
    pass


class MagicMismatch(FormatError):
    pass


class TruncatedStream(FormatError):
    pass


class ModeMismatch(FormatError):
    pass


class UnsupportedFormat(FormatError):
    pass
