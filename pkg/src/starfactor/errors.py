"""Exception hierarchy shared by every module."""


class StarFactorError(Exception):
    """Base class for all errors raised by this package."""


class InputError(StarFactorError, ValueError):
    """An input violates a documented precondition."""


class ContractError(StarFactorError, ValueError):
    """A packing operation was asked to do something its contract forbids."""


class InvariantError(StarFactorError, RuntimeError):
    """An internal invariant broke. This always indicates a bug."""


class SolverFailure(StarFactorError, RuntimeError):
    """A solver stage could not complete in faithful mode."""

    def __init__(self, stage: str, message: str, diagnostics: dict | None = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.diagnostics = dict(diagnostics or {})
