"""Exception types shared across the package."""


class GinueLabError(Exception):
    """Base class for all structured errors raised by this package."""


class ShapeError(GinueLabError):
    """Matrix dimensions incompatible with the requested operation."""


class MeasureError(GinueLabError):
    """Invalid spectral measure or deformation specification."""


class AtomCollisionError(GinueLabError):
    """Probe point coincides with an atom of the measure."""


class SolveError(GinueLabError):
    """Root solve precondition violated or solve failed."""


class TraceError(GinueLabError):
    """Boundary tracing failed to close or terminate within budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EigensolverError(GinueLabError):
    """Eigenvalue iteration failed to converge."""


class QuadratureError(GinueLabError):
    """Adaptive quadrature could not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class SamplingError(GinueLabError):
    """Monte Carlo sampling could not produce a usable estimate."""


class ConfigError(GinueLabError):
    """Invalid run configuration (CLI exit code 2)."""
