"""Exception hierarchy.

Every error is a ``ValueError`` so callers that only care about bad input can
catch that; the CLI reports ``type(err).__name__`` on stderr.
"""


class EnvelopeError(ValueError):
    """Base class for all validation errors raised by the package."""


class NegativeSupport(EnvelopeError):
    pass


class InvalidParameter(EnvelopeError):
    pass


class NonMonotonicGrid(EnvelopeError):
    pass


class TooFewSamples(EnvelopeError):
    pass


class DomainError(EnvelopeError):
    """Evaluation requested outside the parameter interval of a non-periodic function."""


class MissingDerivatives(EnvelopeError):
    pass


class NotHorizontallyRegular(EnvelopeError):
    pass


class NotHorizontal(EnvelopeError):
    pass


class CompatibilityViolation(EnvelopeError):
    """The height function does not satisfy t' = (p')^2 - p^2 on the grid."""


class DegenerateRadius(EnvelopeError):
    """p + p'' vanishes at a node (cusp of the projected envelope)."""


class NotPeriodic(EnvelopeError):
    pass


class GridMismatch(EnvelopeError):
    pass


class PreconditionNotConstantSign(EnvelopeError):
    pass


class DerivativeVanishes(EnvelopeError):
    pass


class NegativeSupportUnresolvable(EnvelopeError):
    pass


class ParallelLines(EnvelopeError):
    pass


class CsvFormatError(EnvelopeError):
    """Malformed CSV input; the message carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
