"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from typing import Optional


class MandelRaysError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class AngleParseError(MandelRaysError):
    """Text is not a valid angle."""


class NotPeriodicError(MandelRaysError):
    """Operation needs a periodic angle."""


class NotPreperiodicError(MandelRaysError):
    """Operation needs a strictly preperiodic angle."""


class ConvergenceError(MandelRaysError):
    """A Newton iteration or continuation did not converge."""

    def __init__(
        self,
        message: str,
        *,
        level: Optional[int] = None,
        found: Optional[int] = None,
        expected: Optional[int] = None,
    ):
        super().__init__(message)
        self.level = level
        self.found = found
        self.expected = expected


class WrongOrbitError(ConvergenceError):
    """Misiurewicz solve converged to a parameter with different (l, n)."""

    def __init__(self, message: str, parameter: complex):
        super().__init__(message)
        self.parameter = parameter


class RenderError(MandelRaysError):
    """Invalid render request."""


class ArtifactIOError(MandelRaysError):
    """Reading or writing an output file failed."""


class InternalConsistencyError(RuntimeError):
    """A combinatorial self-check failed; indicates a bug, not bad input."""
