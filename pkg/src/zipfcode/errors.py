"""Exception hierarchy shared by all zipfcode modules."""


class ZipfcodeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ZipfcodeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatchError(ZipfcodeError, ValueError):
    pass


class DegenerateInputError(ZipfcodeError, ValueError):
    """Input is valid but carries no usable variation (all tied, all equal, ...)."""


class EmptyInputError(ZipfcodeError, ValueError):
    pass


class MalformedStreamError(ZipfcodeError, ValueError):
    pass


class ConvergenceError(ZipfcodeError, RuntimeError):
    """A numerical solver failed to bracket or locate a root."""


class ResourceLimitError(ZipfcodeError, RuntimeError):
    pass


class ParseError(ZipfcodeError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateTokenError(ParseError):
    pass


class EncodingError(ZipfcodeError, ValueError):
    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


class CollinearityError(DegenerateInputError):
    """A regression regressor takes a single value."""
