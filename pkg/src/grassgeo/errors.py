"""Exception hierarchy shared across the package.

Input-shape and type problems raise plain ValueError.  Everything that is a
numerical domain issue (leaving a coordinate chart, singular chart block,
non-convergence) derives from GeometryError so callers can distinguish
"bad request" from "request left the domain of the computation".
"""


class GeometryError(Exception):
    """Base class for numerical domain failures."""


class DomainError(GeometryError):
    """Input lies outside the mathematical domain of the operation."""


class ChartEscapeError(DomainError):
    """A geodesic or matrix function hit a pole of the chart."""


class NotInChartError(DomainError):
    """Plane cannot be represented in the affine chart around the origin."""


class ConsistencyError(GeometryError):
    """Two independent computation routes disagreed beyond tolerance."""


class NumericalFailure(GeometryError):
    """An underlying factorization did not converge."""
