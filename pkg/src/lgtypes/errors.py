"""Exception hierarchy shared by every module of the toolkit."""


class LGError(Exception):
    """Base class for all toolkit errors."""


class UnknownVariable(LGError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ArityMismatch(LGError, ValueError):
    pass


class LengthMismatch(LGError, ValueError):
    pass


class SortMismatch(LGError, ValueError):
    pass


class SortOverlap(LGError, ValueError):
    pass


class VariableClash(LGError, ValueError):
    pass


class IllFormedFormula(LGError, ValueError):
    pass


class MissingAssignment(LGError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DimensionMismatch(LGError, ValueError):
    pass


class ZeroParameter(LGError, ValueError):
    pass


class ExtensionError(LGError):
    """Raised when a partial isomorphism cannot be extended."""


class NoForwardEndo(ExtensionError):
    pass


class NoBackwardEndo(ExtensionError):
    pass


class InternalCheckFailed(ExtensionError):
    pass


class ConflictingAlignment(ExtensionError):
    pass


class NotInjective(ExtensionError):
    pass


class CheckFailed(LGError):
    pass


class ParseError(LGError, ValueError):
    """Input text could not be turned into a domain object.

    ``line`` and ``column`` are 1-based; either may be ``None`` when the
    error is not tied to a position.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class TextSyntaxError(ParseError):
    pass


class ValidationError(ParseError):
    pass
