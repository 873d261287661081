"""Exception types shared across the package."""


class KGraphError(Exception):
    """Base class for all structured errors raised by this package."""


class DuplicateName(KGraphError):
    pass


class UnknownVertex(KGraphError):
    pass


class UnknownEdge(KGraphError):
    pass


class BadColor(KGraphError):
    pass


class SameColor(KGraphError):
    pass


class NotComposable(KGraphError):
    pass


class NotOrthogonal(KGraphError):
    pass


class DegreeTooLarge(KGraphError):
    pass


class MalformedSquare(KGraphError):
    pass


class SwapUndefined(KGraphError):
    """No square covers the requested composable orthogonal pair.

    Cannot happen on a k-graph that passed validation; raised when square
    data is partial.
    """


class RequiresValidation(KGraphError):
    """Operation needs the unique-factorization axioms, i.e. a validated k-graph."""


class InvalidKGraph(KGraphError):
    """Square data failed validation; carries the report."""

    def __init__(self, report):
        super().__init__(f"validation failed with {len(report.failures)} finding(s)")
        self.report = report


class ParseError(KGraphError):
    """Input text rejected; carries 1-based line/column of the offending token."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class ReplayError(KGraphError):
    """A claimed derivation failed machine checking."""
