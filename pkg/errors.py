"""Exception hierarchy shared by the numerical modules and the CLI."""
from __future__ import annotations

from typing import Optional


class TsallisError(Exception):
    """Base class for every error raised by the toolkit."""


class QDomainError(TsallisError, ValueError):
    """Argument outside the domain of a q-deformed function."""


class InvalidQIndexError(TsallisError, ValueError):
    """Entropic index unusable for the requested operation."""


class GridError(TsallisError, ValueError):
    """Malformed support grid or distributions living on different grids."""


class LengthMismatchError(GridError):
    pass


class NormalizationError(TsallisError, ValueError):
    pass


class AbsoluteContinuityError(TsallisError, ValueError):
    """A distribution puts mass where its reference has none."""


class DegenerateDenominatorError(TsallisError, ValueError):
    pass


class ProblemFormatError(TsallisError, ValueError):
    """Problem file that does not parse into valid model objects."""

    def __init__(
        self,
        field: str,
        message: str,
        *,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        self.field = field
        self.line = line
        self.column = column
        location = field or "<root>"
        if line is not None:
            location = f"{location} (line {line}, column {column})"
        super().__init__(f"{location}: {message}")


class SolverError(TsallisError, RuntimeError):
    """A solver could not produce a converged result."""


class NonConvergenceError(SolverError):
    pass


class InfeasibleTargetsError(SolverError):
    pass


class CutoffCollapseError(SolverError):
    """The Tsallis cut-off removed every grid point."""


class FixedPointOscillationError(NonConvergenceError):
    pass


class MatchingDegenerateError(SolverError):
    """Expectation-matching denominator 1 - (1 - q) I_q(l||p) is not positive."""


__all__ = [
    "AbsoluteContinuityError",
    "CutoffCollapseError",
    "DegenerateDenominatorError",
    "FixedPointOscillationError",
    "GridError",
    "InfeasibleTargetsError",
    "InvalidQIndexError",
    "LengthMismatchError",
    "MatchingDegenerateError",
    "NonConvergenceError",
    "NormalizationError",
    "ProblemFormatError",
    "QDomainError",
    "SolverError",
    "TsallisError",
]
