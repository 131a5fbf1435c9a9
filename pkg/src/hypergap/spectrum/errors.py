class InvariantViolation(RuntimeError):
    """A numerically checked inequality or identity failed."""


class InvalidRegime(ValueError):
    """Parameters outside the regime in which an estimate applies."""


class PreconditionError(ValueError):
    """Inputs to a comparison check do not satisfy its hypotheses."""
