"""Exception types shared across the package."""


class MoritaLabError(Exception):
    """Base class for all library errors."""


class InputShapeError(MoritaLabError):
    pass


class NearSingularError(MoritaLabError):
    pass


class NonStabilizingError(MoritaLabError):
    pass


class NotSubalgebraError(MoritaLabError):
    pass


class DegenerateSpectrumError(MoritaLabError):
    pass


class NotProjectionError(MoritaLabError):
    pass


class NotFullError(MoritaLabError):
    pass


class InconsistentSpanError(MoritaLabError):
    pass


class BadProjectionError(MoritaLabError):
    pass


class IndexNotInSubalgebraError(MoritaLabError):
    pass


class RankDeficientError(MoritaLabError):
    pass


class AxiomViolationError(MoritaLabError):
    pass


class FrameNotFoundError(MoritaLabError):
    pass


class StarConditionError(MoritaLabError):
    pass


class SizeCapError(MoritaLabError):
    pass


class ParseError(MoritaLabError):
    """Scenario file could not be parsed; carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
