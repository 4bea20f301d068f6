"""Exception hierarchy shared by every module.

Anything derived from :class:`LabError` is a *domain* error: the CLI maps it
to exit code 1 and prints the message.
"""


class LabError(Exception):
    """Base class for all domain errors raised by forcelab."""


class AlgebraError(LabError):
    pass


class CapExceeded(LabError):
    """A configured size cap would be exceeded."""


class ParseError(LabError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PosetError(LabError):
    pass


class NotDenseError(PosetError):
    pass


class UniverseError(LabError):
    pass


class ValuationError(LabError):
    pass


class QuotientError(LabError):
    """Internal-consistency failure while building or collapsing a quotient."""


class ForcingError(LabError):
    pass
