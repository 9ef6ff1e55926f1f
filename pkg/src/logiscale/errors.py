"""Exception types shared across the toolkit.

Callers that only care about "bad input" can catch :class:`InputError`;
the CLI maps :class:`InfeasibleTargetError` to its own exit code.
"""

from __future__ import annotations


class ScalingError(Exception):
    """Base class for every error raised by logiscale."""


class InputError(ScalingError, ValueError):
    """Malformed or insufficient input (records, files, flags)."""


class DomainError(InputError):
    """A numeric argument lies outside the domain of the operation."""


class RangeError(ScalingError, OverflowError):
    """A result cannot be represented, even in log domain."""


class ConditioningError(InputError):
    """The fitting design cannot identify the requested parameters."""

    def __init__(self, message: str, axis: str | None = None):
        super().__init__(message)
        self.axis = axis


class SchemaError(InputError):
    """A run-log file does not match the expected column layout."""

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


class RowError(InputError):
    """A single run-log row holds an invalid value."""

    def __init__(self, message: str, row: int):
        super().__init__(message)
        self.row = row


class StateError(ScalingError):
    """An operation needs state the caller did not provide."""


class InfeasibleTargetError(ScalingError):
    """A target loss at or below the irreducible floor."""

    def __init__(self, target: float, floor: float):
        super().__init__(
            f"target loss {target!r} is not above the irreducible floor E={floor!r}; "
            f"no finite compute reaches it"
        )
        self.target = target
        self.floor = floor
