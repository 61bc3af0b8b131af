"""Exception hierarchy."""


class SelfCommError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(SelfCommError, ValueError):
    pass


class DimensionMismatch(SelfCommError, ValueError):
    pass


class ClusterAmbiguity(SelfCommError):
    """Single-linkage eigenvalue clusters are wider than the gap threshold."""


class AxiomViolation(SelfCommError):
    def __init__(self, axiom, message=""):
        self.axiom = axiom
        super().__init__(message or f"quasitrace axiom ({axiom}) violated")


class NotTraceless(SelfCommError, ValueError):
    pass


class ProjectionIncompatible(SelfCommError, ValueError):
    """Projection is not rank one or does not commute with the matrix."""


class InternalInvariantBroken(SelfCommError):
    """A constructed decomposition failed its post-hoc verification."""

    def __init__(self, failures):
        self.failures = failures
        names = ", ".join(f"{name} ({res:.3e} > {thr:.3e})" for name, res, thr in failures)
        super().__init__(f"decomposition failed verification: {names}")


class ShiftTooSmall(SelfCommError, ValueError):
    pass


class MismatchedProvenance(SelfCommError, ValueError):
    """An approximation was paired with an element it was not built from."""


class EmptyInput(SelfCommError, ValueError):
    pass


class NotCauchy(SelfCommError):
    """Tail oscillation of a sequence exceeds the tolerance."""


class InvalidTuple(SelfCommError, ValueError):
    def __init__(self, failed):
        self.failed = failed
        super().__init__(f"assembly tuple fails conditions: {', '.join(failed)}")
