"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration / topology problems
exit with 2, path-planning failures with 3, validation failures with 4.
"""


class BorelWkbError(Exception):
    """Base class for all package errors."""


class ConfigError(BorelWkbError):
    """Invalid run configuration (violated delta inequalities etc.)."""


class DegenerateTurningPoint(BorelWkbError):
    """A configuration requiring simple zeros met a multiple zero."""


class PathThroughTurningPoint(BorelWkbError):
    """An integration path violates the turning-point clearance."""


class QuadratureFailure(BorelWkbError):
    """Adaptive quadrature could not reach the requested tolerance."""


class Unreachable(BorelWkbError):
    """No path inside the lifted domain connects the two points."""


class TraceStalled(BorelWkbError):
    """Curve tracing step collapsed below the minimum step size."""


class AmbiguousDirection(BorelWkbError):
    """Re S does not vary measurably along the whole curve."""


class TopologyMismatch(BorelWkbError):
    """Traced Stokes skeleton does not realize the expected adjacency."""


class NotFound(BorelWkbError):
    """A root search exhausted all seeds without converging."""


class UnknownRegion(BorelWkbError):
    """A lifted point could not be assigned to a Stokes region."""


class BranchAmbiguity(BorelWkbError):
    """An inverse-action image crossed a cut without resolvable winding."""


class PlanFailure(BorelWkbError):
    """No primitive sequence produced a certified integration path."""

    def __init__(self, message, region=None, chart=None, j=None, witness=None):
        super().__init__(message)
        self.region = region
        self.chart = chart
        self.j = j
        self.witness = witness


class UncertifiedPath(BorelWkbError):
    """apply_R was handed a path without a valid lift certificate."""


class InterpolationMiss(BorelWkbError):
    """A lifted sample point fell outside every sampled chart."""


class SampleOnCut(BorelWkbError):
    """A grid point landed within cut_eps of a branch cut."""


class ShiftOffSurface(BorelWkbError):
    """A shifted sample point left the modeled fiber."""


class NonDecayingTail(BorelWkbError):
    """Laplace integrand failed to decay before truncation."""


class OneSidedData(BorelWkbError):
    """Only one flap along a cut carries samples; jump is partial."""


class FitDegenerate(BorelWkbError):
    """Watson-coefficient fit residual exceeded fit_tol."""


class ValidationFailure(BorelWkbError):
    """End-to-end oracle validation did not meet val_tol."""
