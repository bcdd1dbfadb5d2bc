"""Exception types shared across the package."""


class RileySliceError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(RileySliceError, ValueError):
    """Bad user input: malformed slope, orders, viewport, etc."""


class NumericRangeError(RileySliceError, OverflowError):
    """Matrix entries or polynomial values left the representable range."""


class SeedFailureError(RileySliceError):
    """No convergent Newton seed found for a pleating ray."""


class BranchTrackingError(RileySliceError):
    """Path continuation lost its branch (step underflow).

    Carries the last good sample so callers can inspect how far the
    ray got before tracking failed.
    """

    def __init__(self, message, last_t=None, last_rho=None):
        super().__init__(message)
        self.last_t = last_t
        self.last_rho = last_rho


class RootConvergenceError(RileySliceError):
    """Aberth sweep limit hit; carries partial results.

    ``roots`` holds the best estimates, ``unconverged`` the indices
    that failed the per-root convergence test.
    """

    def __init__(self, message, roots, unconverged):
        super().__init__(message)
        self.roots = roots
        self.unconverged = unconverged


class ContinuationError(RileySliceError):
    """Extended-ray continuation failed past a critical point."""
