"""Exception types shared across the package."""


class MexNeedletError(Exception):
    """Base class for all package-specific errors."""


class CalderonDivergenceError(MexNeedletError):
    """The Calderon integral diverges at 0 (filter does not vanish there)."""


class SeriesOverflowError(MexNeedletError):
    """Kernel series would need more than 10**6 terms for the requested tolerance."""


class UnsupportedFilterError(MexNeedletError):
    """Operation only implemented for a specific filter family."""


class CellCountOverflowError(MexNeedletError):
    """Requested partition is finer than the desk-scale guard allows."""


class BandLimitError(MexNeedletError):
    """Field carries spectral content beyond the band limit of the target."""


class ZeroFieldError(MexNeedletError):
    """Operation undefined for the zero field."""
