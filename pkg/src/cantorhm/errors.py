"""Exception hierarchy shared by every module."""


class CantorError(Exception):
    """Base class for all package errors."""


class UsageError(CantorError, ValueError):
    """Invalid arguments: mismatched spaces, bad digits, wrong colour, ..."""


class ParseError(UsageError):
    """Malformed text input; carries the offending line number."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ResourceError(CantorError, RuntimeError):
    """An enumeration or solver cap was exceeded."""


class ContractError(CantorError):
    """A value does not satisfy a claimed property (e.g. a Lipschitz bound)."""


class InternalError(CantorError, RuntimeError):
    """A mathematical invariant the code relies on was found violated."""
