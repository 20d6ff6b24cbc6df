"""Semantic exception hierarchy shared by all modules.

Exit-code mapping used by the CLI:
    ValidationError  -> 1
    SingularityError -> 2
    I/O (OSError)    -> 3
"""


class QDecisionError(Exception):
    """Base class for all library errors."""


class ValidationError(QDecisionError):
    """Invalid input: out-of-range probability, bad schema, bad dimension."""


class DomainError(ValidationError):
    """A numeric argument is outside its mathematical domain."""


class DuplicateLabelError(ValidationError):
    """Two records in one file share a label."""


class ParseError(ValidationError):
    """A dataset file does not conform to the expected schema."""

    def __init__(self, message, row=None, column=None):
        loc = ""
        if row is not None:
            loc = f" (row {row}" + (f", column {column!r}" if column else "") + ")"
        super().__init__(message + loc)
        self.row = row
        self.column = column


class UnsupportedFormatError(ValidationError):
    """Requested output format is not one of the supported serializations."""


class UnsupportedDimensionError(ValidationError):
    """Operation defined only for a specific condition-space dimension."""


class SingularityError(QDecisionError):
    """A renormalizing denominator (or determinant) is numerically zero."""


class ZeroNormError(SingularityError):
    """A projection annihilated the state."""


class ParallelLinesError(SingularityError):
    """Two level-set lines have no unique intersection."""


class DegenerateExperimentError(ValidationError):
    """All interference amplitudes vanish; no phase geometry exists."""
