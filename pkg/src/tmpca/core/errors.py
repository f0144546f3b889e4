"""Exception hierarchy for tmpca.

Every failure raised by the library derives from TmpcaError so callers (and
the CLI's exit-code table) can catch library errors without swallowing
programming errors. The subclasses also inherit from the closest builtin
exception, so code that expects a ValueError keeps working.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Union


class TmpcaError(Exception):
    """Base class for all errors raised by tmpca."""


class InvalidInputError(TmpcaError, ValueError):
    """Data values are unusable: empty, non-finite, asymmetric, single-class.

    Example:
        >>> raise InvalidInputError("data contains non-finite entries")
        Traceback (most recent call last):
            ...
        tmpca.core.errors.InvalidInputError: data contains non-finite entries
    """


class InvalidArgumentError(TmpcaError, ValueError):
    """A parameter is out of range or a dimension does not match."""


class InvalidShapeError(InvalidArgumentError):
    """A sequence length does not fit the tree (N not a power of P, etc.)."""


class NumericalFailureError(TmpcaError, ArithmeticError):
    """An iterative kernel did not converge.

    Attributes:
        residual: The remaining off-diagonal norm (or comparable measure)
            when the iteration budget ran out.
    """

    def __init__(self, message: str, residual: float) -> None:
        """Initialize a NumericalFailureError.

        Args:
            message: Human-readable description of the failure.
            residual: Residual measure at the point of failure.
        """
        self.residual = residual
        super().__init__(f"{message} (residual={residual:.3e})")


class ConfigurationError(TmpcaError):
    """Configuration is missing, unreadable or invalid.

    Attributes:
        problems: Every problem found, so they can be reported together.
    """

    def __init__(self, problems: Union[str, Sequence[str]]) -> None:
        """Initialize with one or many problem descriptions.

        Args:
            problems: A single message or a list of messages.
        """
        self.problems = [problems] if isinstance(problems, str) else list(problems)
        super().__init__("; ".join(self.problems))


class IngestionError(TmpcaError):
    """An input file (dataset, embedding table, stop-word list) is malformed.

    Attributes:
        path: File being read.
        line_number: 1-based line of the offending record, if known.
    """

    def __init__(
        self, message: str, path: Union[str, Path], line_number: Optional[int] = None
    ) -> None:
        """Initialize an IngestionError.

        Args:
            message: What is wrong with the record.
            path: File being read.
            line_number: 1-based line number, if the problem is line-specific.
        """
        self.path = Path(path)
        self.line_number = line_number
        location = f"{self.path}:{line_number}" if line_number is not None else str(self.path)
        super().__init__(f"{location}: {message}")


class ResourceBudgetError(TmpcaError):
    """A requested configuration would exceed the configured memory budget."""


class ClockResolutionError(TmpcaError):
    """A timing is too short to be distinguished from clock noise."""
