"""Exception hierarchy shared across the package."""


class PargoidError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PargoidError):
    """Malformed user input: files, element names, CLI values, configs.

    Parse errors carry a position; ``str()`` renders it as line:col.
    """

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        if self.line is not None:
            return f"{self.line}:{self.column or 0}: {self.message}"
        return self.message


class ResourceExhausted(PargoidError):
    """An exact result was requested but the operation budget was hit."""

    def __init__(self, stage, budget):
        super().__init__(f"{stage}: budget of {budget} exhausted before closure")
        self.stage = stage
        self.budget = budget


class InternalError(PargoidError):
    """Bug alarm: an invariant the theory guarantees was observed broken."""
