"""Exception hierarchy shared by the numerical modules and the commands."""


class DimensionReductionError(Exception):
    """Base class for every error raised by the reduction app."""


class DomainError(DimensionReductionError, ValueError):
    """An operator or argument violates a numerical precondition."""


class PreconditionError(DomainError):
    """The hypothesis of a verification check does not hold for its inputs."""


class ProblemFileError(DimensionReductionError):
    """A problem file could not be read or parsed (exit status 2)."""


class ProblemValidationError(DimensionReductionError):
    """A parsed problem violates a POVM or projector invariant (exit status 3)."""
