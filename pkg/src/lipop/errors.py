"""Exception hierarchy shared by every lipop module."""


class LipopError(Exception):
    """Base class for all errors raised by lipop."""


class DomainError(LipopError, ValueError):
    """A point outside the closed unit disk was passed to an evaluator."""


class DegenerateParameterError(LipopError, ValueError):
    pass


class NotASelfMapError(LipopError, ValueError):
    pass


class UnsupportedNormPairError(LipopError, ValueError):
    pass


class DimensionMismatchError(LipopError, ValueError):
    pass


class PreconditionError(LipopError, ValueError):
    pass


class SpecError(LipopError, ValueError):
    """Malformed or schema-invalid JSON input."""


class EvaluationError(LipopError, ArithmeticError):
    """An evaluator produced NaN; ``point`` holds the offending z."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point
