"""Exception hierarchy shared by the numerical modules and the CLI."""

from __future__ import annotations


class ZenolabError(Exception):
    """Base class for all library errors."""


class ConfigError(ZenolabError, ValueError):
    """Inadmissible physical configuration."""


class DomainError(ZenolabError, ValueError):
    """Argument outside the domain of a formula (e.g. sigma >= sqrt(u))."""


class RegimeError(ZenolabError):
    """Input is outside the regime where the peaked-spectrum analysis holds.

    Raised for shallow levels and for quartic truncations whose zeros do not
    form two complex-conjugate pairs.
    """


class NumericalError(ZenolabError):
    """An iterative or quadrature kernel failed to reach its tolerance."""

    def __init__(self, operation: str, message: str, achieved: float | None = None):
        self.operation = operation
        self.achieved = achieved
        detail = f"{operation}: {message}"
        if achieved is not None:
            detail += f" (achieved tolerance {achieved:.3e})"
        super().__init__(detail)


class ClassificationError(NumericalError):
    """Pole labels (narrow/broad) are inconsistent."""
