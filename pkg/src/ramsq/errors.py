"""Exception taxonomy shared by all ramsq modules."""


class RamsqError(Exception):
    """Base class for all library-specific errors."""


class PreconditionError(RamsqError, ValueError):
    """A documented hypothesis of an operation does not hold for the input."""


class ResourceLimitError(RamsqError):
    """Input exceeds the configured exact-computation limit."""


class CertificateRefused(RamsqError):
    """Structural validation failed; the verifier refuses rather than guess."""


class BoundNotApplicable(RamsqError):
    """A hitting-set bound rule does not apply (remainder has a triangle)."""


class IncompleteAnalysis(RamsqError):
    """No case of a case-driven procedure closed at this scale.

    Raised instead of returning an unverified object: soundness over
    completeness.  ``attempts`` records which cases were tried.
    """

    def __init__(self, message: str, attempts: list[str] | None = None):
        super().__init__(message)
        self.attempts = attempts or []


class InternalInvariantError(RamsqError):
    """A condition the algorithm guarantees was violated; indicates a bug."""
