"""Exception types shared across the package."""


class BernsegError(Exception):
    """Base class for package-specific errors."""


class AllZeros(BernsegError):
    """The 0/1 sequence contains no 1's; no recurrence structure exists."""


class InvalidChangePoints(BernsegError, ValueError):
    """Change points are unsorted, duplicated, or outside (0, N)."""


class DegenerateData(BernsegError):
    """Input data cannot support the requested encoding."""


class BadThresholds(BernsegError, ValueError):
    """Lower threshold is not strictly below the upper one."""


class PatternLongerThanSeries(BernsegError, ValueError):
    pass


class LengthMismatch(BernsegError, ValueError):
    pass


class DimMismatch(BernsegError, ValueError):
    pass


class KTooLarge(BernsegError, ValueError):
    pass


class DegenerateCounts(BernsegError):
    """Every sequence has a zero expected cell at every candidate split."""


class BadCovariance(BernsegError, ValueError):
    """Covariance matrix is not positive definite."""


class InvalidRegime(BernsegError, ValueError):
    """Error-bound inputs violate the basic range requirements."""


class ParseError(BernsegError):
    """CSV field could not be parsed; carries line/column context."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class RaggedRows(BernsegError):
    """CSV rows do not all have the same number of fields."""


class EmptyFile(BernsegError):
    pass
