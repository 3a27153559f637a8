"""Exception hierarchy shared by all toolkit modules.

The split matters for the service/CLI layer: ``InvalidInputError``
subclasses map to "bad request" (CLI exit 2), ``ComputationError``
subclasses to "computation failed" (CLI exit 3).
"""


class AgmliftError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(AgmliftError):
    """Input violates a documented precondition."""


class ComputationError(AgmliftError):
    """A computation could not be carried out (precision, convergence, ...)."""


class FieldMismatchError(InvalidInputError):
    """Operands belong to different coefficient rings."""


class NonUnitError(InvalidInputError):
    """An inverse of a non-unit was requested."""


class NotASquareError(InvalidInputError):
    """Square-root argument outside the admissible residue class."""


class InexactDivisionError(InvalidInputError):
    """Division by a power of two that does not divide exactly."""


class PrecisionError(ComputationError):
    """Not enough guaranteed digits to produce a meaningful result."""


class LiftError(ComputationError):
    """Hensel lifting failed (degenerate seed or singular digit system)."""


class RelationError(ComputationError):
    """A theta relation that was expected to hold is violated."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InvalidCurveError(InvalidInputError):
    """Curve parameters outside the ordinary model."""


class CountingError(ComputationError):
    """Point counting could not resolve a verified trace."""
