class ArtifactError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(ArtifactError):
    """An operation was invoked outside its stated preconditions."""


class ConstructionError(ArtifactError):
    """A construction failed one of its own exact checks."""


class VerificationError(ArtifactError):
    """A certificate failed re-verification."""
