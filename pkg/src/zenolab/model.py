"""Physical configuration and its dimensionless parameterization.

Everything downstream works with ``u = 2 m a^2 V0`` (barrier strength),
``w = (b - a)/a`` (barrier width) and times measured in units of
``2 m a^2``.  Physical units only appear at the CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from zenolab.errors import ConfigError


@dataclass(frozen=True)
class PhysicalConfig:
    """Mass ``m``, well radius ``a``, barrier outer radius ``b`` and barrier
    height ``V0`` in natural units (hbar = 1)."""

    m: float
    a: float
    b: float
    V0: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ModelParams:
    u: float
    w: float
    time_scale: float = 1.0

    def __post_init__(self) -> None:
        if not (self.u > 0 and self.w > 0 and self.time_scale > 0):
            raise ConfigError(
                f"u, w and time_scale must be positive (u={self.u}, w={self.w}, "
                f"time_scale={self.time_scale})"
            )

    @property
    def sqrt_u(self) -> float:
        return math.sqrt(self.u)

    def with_w(self, w: float) -> ModelParams:
        return ModelParams(self.u, w, self.time_scale)

    def to_physical(self, m: float, a: float) -> PhysicalConfig:
        """Inverse of :func:`to_dimensionless` given the mass and well radius."""
        return PhysicalConfig(m=m, a=a, b=a * (1.0 + self.w), V0=self.u / (2.0 * m * a * a))


def _positive(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x) and x > 0


def validate(config: PhysicalConfig) -> ValidationReport:
    problems = []
    if not _positive(config.m):
        problems.append("m must be positive")
    if not _positive(config.a):
        problems.append("a must be positive")
    if not _positive(config.b):
        problems.append("b must be positive")
    if not _positive(config.V0):
        problems.append("V0 must be positive")
    if _positive(config.a) and _positive(config.b) and not config.b > config.a:
        problems.append("b must exceed a")
    return ValidationReport(tuple(problems))


def to_dimensionless(config: PhysicalConfig) -> ModelParams:
    report = validate(config)
    if not report:
        raise ConfigError("; ".join(report.violations))
    ma2 = config.m * config.a * config.a
    return ModelParams(
        u=2.0 * ma2 * config.V0,
        w=(config.b - config.a) / config.a,
        time_scale=2.0 * ma2,
    )
