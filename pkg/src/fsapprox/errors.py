"""Exception hierarchy shared by the compiler stages."""


class FsApproxError(Exception):
    """Base class for all errors raised by fsapprox."""


class GrammarError(FsApproxError):
    """Problem with grammar input.  ``line``/``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class GrammarSyntaxError(GrammarError):
    """Malformed grammar text."""


class GrammarSemanticError(GrammarError):
    """Well-formed text describing an invalid grammar (undeclared features, missing start...)."""


class ResourceLimitError(FsApproxError):
    """A construction exceeded its configured state cap."""

    def __init__(self, message, limit, site=None):
        self.limit = limit
        self.site = site
        super().__init__(message)
