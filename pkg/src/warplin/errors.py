"""Exception hierarchy shared by all warplin modules."""


class WarplinError(Exception):
    """Base class for every error raised by warplin."""


class PathError(WarplinError, ValueError):
    """A point sequence is not a warping path."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BoundaryViolation(PathError):
    pass


class StepViolation(PathError):
    pass


class EnumerationTooLarge(WarplinError):
    pass


class InfeasibleConstraint(WarplinError, ValueError):
    """No admissible warping path survives the constraint mask."""


class DimensionMismatch(WarplinError, ValueError):
    pass


class InvalidShape(WarplinError, ValueError):
    pass


class IndexOutOfRange(WarplinError, IndexError):
    pass


class LabelDomainError(WarplinError, ValueError):
    pass


class LabelOutOfRange(WarplinError, ValueError):
    pass


class EmptyDataset(WarplinError, ValueError):
    pass


class TooFewExamples(WarplinError, ValueError):
    pass


class ParseError(WarplinError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class EmptyFile(WarplinError, ValueError):
    pass


class FormatVersionMismatch(WarplinError, ValueError):
    pass


class ShapeMismatch(WarplinError, ValueError):
    pass


class DivisionDomain(WarplinError, ZeroDivisionError):
    pass
