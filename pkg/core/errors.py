# core/errors.py
from __future__ import annotations


class DrsError(ValueError):
    """Base class for input and precondition problems."""


class FormatError(DrsError):
    """Malformed input file; `line` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GraphFormatError(FormatError):
    pass


class InstanceFormatError(FormatError):
    pass


class DisconnectedGraphError(DrsError):
    def __init__(self, u: int, v: int, what: str = "graph"):
        super().__init__(f"{what} is disconnected: no path between {u} and {v}")
        self.u = u
        self.v = v


class PreconditionError(DrsError):
    pass


class WorkLimitExceeded(DrsError):
    def __init__(self, limit: int, checked: int, cardinality: int):
        super().__init__(
            f"work limit of {limit:,} subset checks exceeded at cardinality {cardinality} "
            f"({checked:,} checked)"
        )
        self.limit = limit
        self.checked = checked
        self.cardinality = cardinality


class VerificationError(RuntimeError):
    """A witness built inside the library failed its own verifier."""
