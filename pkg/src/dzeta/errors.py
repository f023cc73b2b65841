"""Exception hierarchy shared by all evaluators."""


class DZetaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DZetaError):
    """Arguments fall outside the region where the operation is defined."""


class PoleError(DZetaError):
    """Argument is within tolerance of a pole of the evaluated function."""


class SingularityError(DZetaError):
    """Point lies on (or too close to) the singular set of the double zeta."""


class PrecisionError(DZetaError):
    """Requested tolerance is unreachable at the current working precision."""


class QuadratureError(DZetaError):
    """Quadrature error estimate exceeds the requested tolerance."""


class InsufficientData(DZetaError):
    """Not enough records to perform the requested fit."""


class SweepAborted(DZetaError):
    """Too many sweep points failed, or a point failed the region check."""
