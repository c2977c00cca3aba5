"""Quasi-stationary levels: bound states of the auxiliary potential
(well of radius ``a`` plus an infinitely wide barrier of height ``V0``).

In dimensionless form a level is a root of

    g(sigma) = sqrt(u - sigma^2) * sin(sigma) + sigma * cos(sigma)

on ``(0, sqrt(u))``, which is ``tan(sigma) = -sigma / sqrt(u - sigma^2)``
with the poles of ``tan`` cleared.  The n-th root lies in
``((2n-1) pi/2, n pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from zenolab.model import ModelParams

#: Levels with ``a*rho0`` below this sit too close to the barrier top for
#: the peaked-spectrum expansion; they are flagged and skipped by default.
SHALLOW_ARHO = 0.5


@dataclass(frozen=True)
class QuasiLevel:
    index: int
    sigma0: float
    arho0: float

    @property
    def ak0(self) -> float:
        return self.sigma0

    @property
    def u(self) -> float:
        return self.sigma0**2 + self.arho0**2

    @property
    def E0_over_V0(self) -> float:
        return self.sigma0**2 / self.u

    @property
    def c1_sq(self) -> float:
        """``a |c1|^2`` for the normalized bound state."""
        return level_norm(self)

    @property
    def shallow(self) -> bool:
        return self.arho0 < SHALLOW_ARHO


def level_function(u: float, sigma: float) -> float:
    return math.sqrt(u - sigma * sigma) * math.sin(sigma) + sigma * math.cos(sigma)


def _level_derivative(u: float, sigma: float) -> float:
    r = math.sqrt(u - sigma * sigma)
    s, c = math.sin(sigma), math.cos(sigma)
    return r * c - sigma * s / r + c - sigma * s


def _solve_bracket(u: float, lo: float, hi: float) -> float:
    flo = level_function(u, lo)
    if flo == 0.0:
        return lo
    # bisection to 1e-13, then safeguarded Newton polish
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        fm = level_function(u, mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        d = _level_derivative(u, x)
        if d == 0.0:
            break
        step = level_function(u, x) / d
        nxt = x - step
        if not (lo - 1e-13 <= nxt <= hi + 1e-13) or abs(step) > 1e-12:
            break
        if abs(level_function(u, nxt)) >= abs(level_function(u, x)):
            break
        x = nxt
    return x


def find_levels(params: ModelParams, include_shallow: bool = True) -> list[QuasiLevel]:
    """All quasi-stationary levels for ``params.u``, ascending in ``sigma0``.

    Levels depend on ``u`` only; ``w`` plays no role.
    """
    u = params.u
    root_u = math.sqrt(u)
    levels = []
    n = 1
    while (2 * n - 1) * math.pi / 2 < root_u:
        lo = (2 * n - 1) * math.pi / 2
        hi = min(n * math.pi, root_u)
        if hi == root_u:
            # stay off the arho0 = 0 endpoint where g is evaluated with sqrt(0)
            hi = math.nextafter(root_u, 0.0)
        sigma0 = _solve_bracket(u, lo, hi)
        arho0 = math.sqrt(u - sigma0 * sigma0)
        if arho0 > 0.0:
            lvl = QuasiLevel(index=n, sigma0=sigma0, arho0=arho0)
            if include_shallow or not lvl.shallow:
                levels.append(lvl)
        n += 1
    return levels


def level_norm(level: QuasiLevel) -> float:
    """``a |c1|^2 = 2 a rho0 / (1 + a rho0)``."""
    return 2.0 * level.arho0 / (1.0 + level.arho0)


def bound_wavefunction_at(level: QuasiLevel, r_over_a):
    """Normalized bound state ``u0`` (in units where ``a = 1``), ``c1 > 0``.

    Accepts scalars or arrays of ``r/a``.
    """
    x = np.asarray(r_over_a, dtype=float)
    c1 = math.sqrt(level_norm(level))
    # continuity at r = a fixes d2 e^{-rho0 a} = c1 sin(k0 a)
    d2_at_a = c1 * math.sin(level.sigma0)
    inside = c1 * np.sin(level.sigma0 * np.minimum(x, 1.0))
    outside = d2_at_a * np.exp(-level.arho0 * (np.maximum(x, 1.0) - 1.0))
    out = np.where(x <= 1.0, inside, outside)
    return float(out) if out.ndim == 0 else out
