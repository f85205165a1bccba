"""Exception hierarchy shared across the package."""


class IcPathError(Exception):
    """Base class for all errors raised by this package."""


class Degenerate(IcPathError):
    """Polygon (or other input) collapses to zero area or repeats vertices."""


class NotSimple(IcPathError):
    """Polygon boundary self-intersects."""


class OutOfRange(IcPathError):
    """Arc-length parameter outside [0, total_length]."""


class EndpointMismatch(IcPathError):
    """Concatenation requires the first path to end where the second starts."""


class TangentInLine(IcPathError):
    """A supposed normal line is parallel to the travel direction."""


class DegenerateEndpoints(IcPathError):
    """Start and end point coincide where a proper segment is required."""


class RegionDegenerate(IcPathError):
    """Two paths bound no usable region (excess crossings or zero width)."""


class AnchorOutside(IcPathError):
    """Dead-region anchor is not strictly inside the polygon."""


class ToleranceUnachievable(IcPathError):
    """Curve escalation exceeded the supported depth without closing."""


class StallDetected(IcPathError):
    """Curve tracing step collapsed; geometry is near-degenerate."""


class StringExhausted(IcPathError):
    """Taut-string length ran out while tracing a normal-touch curve."""


class EmptyDomain(IcPathError):
    """Subtracting dead regions left no free space."""


class PointOutside(IcPathError):
    """Query point lies outside the polygon."""


class DisconnectedEndpoints(IcPathError):
    """Start and destination fall in different components of the domain."""


class PointInDeadRegion(IcPathError):
    """Query point lies inside a dead region."""


class VerificationFailed(IcPathError):
    """A constructed path failed the property verifier."""

    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = reports or []


class NotSingleReflexInstance(IcPathError):
    """Closed-form membership oracle needs exactly one reflex vertex."""
