"""Exception hierarchy shared by every module."""


class WMaxSolError(Exception):
    """Base class for all library errors."""


class InvalidArgument(WMaxSolError, ValueError):
    pass


class MalformedAssignment(WMaxSolError, ValueError):
    pass


class ArityMismatch(WMaxSolError, ValueError):
    pass


class DomainMismatch(WMaxSolError, ValueError):
    pass


class BudgetExceeded(WMaxSolError, RuntimeError):
    """A search hit its node/assignment budget before reaching a verdict.

    Distinct from "no solution" and "no witness": the question is still open.
    """


class NotACoset(WMaxSolError, ValueError):
    pass


class UnsupportedGroup(WMaxSolError, ValueError):
    pass


class InvalidCertificate(WMaxSolError, ValueError):
    pass


class NotInjective(WMaxSolError, ValueError):
    pass


class NotApplicable(WMaxSolError, ValueError):
    pass


class InternalError(WMaxSolError, RuntimeError):
    pass


class ParseError(WMaxSolError, ValueError):
    """Text-format error carrying a line (and optionally column) position."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}".strip())


class ElementOutOfDomain(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class UnknownRelation(ParseError):
    pass
