"""Exception types shared across the package."""


class CCPDMPError(Exception):
    """Base class for sampler-specific failures."""


class EnvelopeViolationError(CCPDMPError):
    """The thinning target exceeded its dominating envelope beyond tolerance.

    Signals an incorrect concave-convex decomposition or derivative bound,
    never a random failure.
    """


class ConcavityViolationError(CCPDMPError):
    """Tangent intersection fell outside its interval; the claimed concave
    part is not concave there."""


class ThinningStallError(CCPDMPError):
    """The thinning loop exceeded its iteration budget."""

    def __init__(self, message, envelope=None):
        super().__init__(message)
        self.envelope = envelope


class UnsupportedBoundError(CCPDMPError):
    """No closed-form derivative bound is available for the requested order
    or hyperparameters."""
