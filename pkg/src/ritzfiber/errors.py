"""Exception hierarchy shared by all ritzfiber modules."""


class RitzFiberError(Exception):
    """Base class for domain errors raised by this package."""


class GenericityError(RitzFiberError):
    """An eigenvalue-disjointness condition required by the operation fails.

    The message names the first failing condition, e.g. ``(G2_1)``.
    """


class SpectralCollisionError(GenericityError):
    """Two spectral parameters that must be distinct coincide numerically."""


class NumericalError(RitzFiberError):
    """An iteration failed to converge or a residual check was exceeded."""


class NotRegularError(RitzFiberError):
    """A matrix required to be regular (non-derogatory) is not."""


class CompletionError(RitzFiberError):
    """No unique bordering completion exists (system not observable)."""
