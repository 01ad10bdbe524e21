"""Exception hierarchy shared by every module."""


class FrameError(Exception):
    """Base class for all library errors."""


class DimensionError(FrameError, ValueError):
    pass


class SchemaError(FrameError, ValueError):
    pass


class LookupFrameError(FrameError, LookupError):
    """Unknown column name, row label or out-of-range position."""


class FrameTypeError(FrameError, TypeError):
    pass


class DomainError(FrameError, ValueError):
    """Input outside the mathematical domain of an operation (empty, non-finite, missing)."""


class ArgumentError(FrameError, ValueError):
    pass


class NumericError(FrameError, ArithmeticError):
    """An iterative numeric routine failed to converge."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ParseError(FrameError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.column = column


class TransportError(FrameError, IOError):
    def __init__(self, message, status=None):
        super().__init__(message)
        self.status = status
