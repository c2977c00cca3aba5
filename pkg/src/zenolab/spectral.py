"""Local expansion of the spectral denominator about a quasi-level.

The absolute scale of ``f`` near a level is ``exp(2 arho0 w)``, which
overflows quickly, so expansions are carried with that factor removed and
stored normalized by the quadratic coefficient (``log_c2`` keeps the scale).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from zenolab import jets
from zenolab.errors import RegimeError
from zenolab.jets import Jet
from zenolab.model import ModelParams
from zenolab.quasibound import QuasiLevel


@dataclass(frozen=True)
class SpectralShape:
    """Closed-form Breit-Wigner data at ``sigma0``:
    ``f2(sigma) = K [(sigma - sigma0)^2 - epsilon (sigma - sigma0) + gamma^2]``."""

    sigma0: float
    arho0: float
    log_K: float
    epsilon: float
    gamma: float

    @property
    def K(self) -> float:
        return math.exp(self.log_K)


@dataclass(frozen=True)
class TaylorCoeffs:
    """Taylor coefficients of ``f`` about ``sigma0`` up to ``order``.

    ``normalized[j] = c_j / c_2``; the absolute coefficients are
    ``normalized * exp(log_c2)``.
    """

    sigma0: float
    order: int
    normalized: tuple[float, ...]
    log_c2: float

    @property
    def coeffs(self) -> np.ndarray:
        return np.asarray(self.normalized) * math.exp(self.log_c2)

    def c(self, j: int) -> float:
        return self.normalized[j] * math.exp(self.log_c2)

    def evaluate(self, delta):
        """Truncated series at ``sigma0 + delta``, relative to ``c_2``."""
        return np.polynomial.polynomial.polyval(delta, self.normalized)


def _require_peaked(level: QuasiLevel) -> None:
    if level.shallow:
        raise RegimeError(
            f"level {level.index} has a*rho0 = {level.arho0:.3g}: peaked approximation invalid"
        )


def shape_constants(params: ModelParams, level: QuasiLevel) -> SpectralShape:
    _require_peaked(level)
    k, r, w = level.sigma0, level.arho0, params.w
    u = k * k + r * r
    decay = math.exp(-2.0 * r * w)
    epsilon = decay * 4.0 * k * r * r * (k * k - r * r) / ((1.0 + r) * u * u)
    # gamma with the (k0^2 - rho0^2) factor cancelled against epsilon
    gamma = decay * 2.0 * k * r * r / ((1.0 + r) * u)
    log_K = 2.0 * r * w + 2.0 * math.log((1.0 + r) * u) - 2.0 * math.log(k) - 4.0 * math.log(r)
    return SpectralShape(sigma0=k, arho0=r, log_K=log_K, epsilon=epsilon, gamma=gamma)


def scaled_denominator_jet(params: ModelParams, level: QuasiLevel, order: int = 4) -> Jet:
    """Jet of ``f(sigma) * exp(-2 arho0 w)`` about ``sigma0``.

    ``alpha_+`` is zero at the level by definition; its constant term is
    pinned to zero so that the tiny ``c_0, c_1`` carry no cancellation
    error from the rounded root.
    """
    u, w = params.u, params.w
    s0, r0 = level.sigma0, level.arho0
    sigma = Jet.variable(s0, order)
    rho = jets.sqrt(u - sigma * sigma)
    sin_s, cos_s = jets.sincos(sigma)
    ratio = sigma / rho
    ap = sin_s + ratio * cos_s
    ap.c[0] = 0.0
    am = sin_s - ratio * cos_s
    grow = jets.exp((rho - r0) * (2.0 * w))
    decay = jets.exp((rho + r0) * (-2.0 * w))
    inv_s2 = 1.0 / (sigma * sigma)
    return (grow * ap * ap + decay * am * am) * u * inv_s2 + (ap * am) * (
        2.0 * math.exp(-2.0 * r0 * w)
    ) * (sigma * sigma * 2.0 - u) * inv_s2


def taylor_expand(params: ModelParams, level: QuasiLevel, order: int = 4) -> TaylorCoeffs:
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    _require_peaked(level)
    jet = scaled_denominator_jet(params, level, order)
    c = jet.c
    c2 = c[2]
    if not c2 > 0:
        raise RegimeError(f"non-positive quadratic coefficient at level {level.index}")
    return TaylorCoeffs(
        sigma0=level.sigma0,
        order=order,
        normalized=tuple(float(x) for x in c / c2),
        log_c2=math.log(c2) + 2.0 * level.arho0 * params.w,
    )
