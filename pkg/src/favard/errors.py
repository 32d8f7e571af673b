"""Exception hierarchy and the record returned by structural checks."""

from __future__ import annotations

from dataclasses import dataclass, field


class FavardError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(FavardError, ValueError):
    """Malformed configuration or violated precondition (CLI exit code 1)."""


class SingularMatrixError(ConfigError):
    """An invertible matrix was required."""


class MomentError(FavardError, ValueError):
    """Invalid measure parameters, missing moments, or a non-PSD moment table
    (CLI exit code 2)."""


class InvariantError(FavardError, RuntimeError):
    """An identity that holds by construction failed (CLI exit code 3)."""


@dataclass
class CheckReport:
    """Outcome of one structural check.

    ``max_residual`` is the largest deviation seen (0 in exact mode when the
    check passes); ``details`` carries check-specific diagnostics.
    """

    name: str
    passed: bool
    max_residual: object = 0
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max residual {self.max_residual}"
