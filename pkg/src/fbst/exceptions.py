"""Exception types shared across the package."""


class FbstError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidParameterError(FbstError, ValueError):
    """A distribution or configuration parameter is outside its domain."""


class DataError(FbstError, ValueError):
    """Input data is missing, malformed, or degenerate."""


class GridError(FbstError, ValueError):
    """A density grid is unusable: non-increasing, too short, zero mass, or too narrow."""


class ZeroReferenceError(FbstError, ValueError):
    """The reference function vanishes somewhere the posterior has mass."""


class ConvergenceError(FbstError, RuntimeError):
    """Sampler diagnostics indicate the chains have not converged.

    Carries the diagnostics that triggered the failure so callers can put
    them in a report before exiting.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
