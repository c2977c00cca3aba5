"""Continuum solutions below the barrier top and the spectral denominator.

Lengths are measured in units of the well radius ``a``: the wave number is
``sigma = a k`` and the decay constant inside the barrier is
``arho = sqrt(u - sigma^2)``.  The barrier occupies ``1 < r/a < 1 + w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from zenolab.errors import DomainError
from zenolab.model import ModelParams
from zenolab.quasibound import QuasiLevel

#: Reject ``sigma`` with ``u - sigma^2 < SIGMA_GUARD * u``.
SIGMA_GUARD = 1e-12


@dataclass(frozen=True)
class WaveNumbers:
    sigma: float
    arho: float

    @property
    def ak(self) -> float:
        return self.sigma

    @classmethod
    def from_sigma(cls, params: ModelParams, sigma: float) -> WaveNumbers:
        _check_sigma(params.u, sigma)
        return cls(sigma=float(sigma), arho=math.sqrt(params.u - sigma * sigma))


@dataclass(frozen=True)
class CoefficientSet:
    """Amplitudes of ``u_E`` in the three regions (``a = 1`` units)."""

    C1: complex
    C2: complex
    D2: complex
    C3: complex
    D3: complex
    alpha_plus: float
    alpha_minus: float
    w: float


def _check_sigma(u: float, sigma) -> None:
    s = np.asarray(sigma, dtype=float)
    if np.any(s <= 0.0) or np.any(u - s * s < SIGMA_GUARD * u):
        raise DomainError(f"sigma must lie in (0, sqrt(u)) with guard {SIGMA_GUARD:g}; got {sigma}")


def alpha_pm(sigma, arho):
    s, c = np.sin(sigma), np.cos(sigma)
    ratio = sigma / arho
    return s + ratio * c, s - ratio * c


def _barrier_matrix(arho: float, x: float) -> np.ndarray:
    e_p, e_m = math.exp(arho * x), math.exp(-arho * x)
    return np.array([[e_p, e_m], [arho * e_p, -arho * e_m]], dtype=complex)


def _free_matrix(sigma: float, x: float) -> np.ndarray:
    e_p, e_m = np.exp(1j * sigma * x), np.exp(-1j * sigma * x)
    return np.array([[e_p, e_m], [1j * sigma * e_p, -1j * sigma * e_m]])


def match_coefficients(params: ModelParams, wn: WaveNumbers, mass_scale: float = 1.0) -> CoefficientSet:
    """Match value and slope at ``r = a`` and ``r = b``.

    ``C1`` is taken real and positive and the set is scaled so that
    ``|C3|^2 = mass_scale / (2 pi sigma)``, the continuum normalization
    in ``a = 1`` units (``mass_scale = m a^2``).
    """
    _check_sigma(params.u, wn.sigma)
    sigma, arho = wn.sigma, wn.arho
    xb = 1.0 + params.w
    inner = np.array([math.sin(sigma), sigma * math.cos(sigma)], dtype=complex)
    c2d2 = np.linalg.solve(_barrier_matrix(arho, 1.0), inner)
    c3d3 = np.linalg.solve(_free_matrix(sigma, xb), _barrier_matrix(arho, xb) @ c2d2)
    scale = math.sqrt(mass_scale / (2.0 * math.pi * sigma)) / abs(c3d3[0])
    ap, am = alpha_pm(sigma, arho)
    return CoefficientSet(
        C1=complex(scale),
        C2=complex(c2d2[0] * scale),
        D2=complex(c2d2[1] * scale),
        C3=complex(c3d3[0] * scale),
        D3=complex(c3d3[1] * scale),
        alpha_plus=float(ap),
        alpha_minus=float(am),
        w=params.w,
    )


def wavefunction_at(coeffs: CoefficientSet, wn: WaveNumbers, r_over_a: float, derivative: bool = False) -> complex:
    """``u_E(r)`` (or ``du_E/d(r/a)`` with ``derivative=True``)."""
    x = float(r_over_a)
    if x < 0:
        raise DomainError("radius must be non-negative")
    k, rho = wn.sigma, wn.arho
    if x <= 1.0:
        if derivative:
            return coeffs.C1 * k * math.cos(k * x)
        return coeffs.C1 * math.sin(k * x)
    if x <= 1.0 + coeffs.w:
        e_p, e_m = math.exp(rho * x), math.exp(-rho * x)
        if derivative:
            return rho * (coeffs.C2 * e_p - coeffs.D2 * e_m)
        return coeffs.C2 * e_p + coeffs.D2 * e_m
    e_p, e_m = np.exp(1j * k * x), np.exp(-1j * k * x)
    if derivative:
        return complex(1j * k * (coeffs.C3 * e_p - coeffs.D3 * e_m))
    return complex(coeffs.C3 * e_p + coeffs.D3 * e_m)


def spectral_denominator(params: ModelParams, sigma):
    """The spectral denominator ``f(sigma)``; vectorized over ``sigma``.

    ``|C1|^2 = 8 m / (pi k f)``, so ``f = 16 |C3 / C1|^2``.
    """
    u, w = params.u, params.w
    _check_sigma(u, sigma)
    s = np.asarray(sigma, dtype=float)
    arho = np.sqrt(u - s * s)
    sin_s, cos_s = np.sin(s), np.cos(s)
    ap = sin_s + s * cos_s / arho
    am = sin_s - s * cos_s / arho
    f = (np.exp(2 * arho * w) * ap**2 + np.exp(-2 * arho * w) * am**2) * u / s**2 + 2 * (
        sin_s**2 - s**2 * cos_s**2 / (u - s**2)
    ) * 2 * (s**2 - u / 2) / s**2
    return float(f) if f.ndim == 0 else f


def spectral_denominator_from_coefficients(coeffs: CoefficientSet) -> float:
    return 16.0 * abs(coeffs.C3 / coeffs.C1) ** 2


def c1_squared_closed_form(params: ModelParams, wn: WaveNumbers, mass_scale: float = 1.0) -> float:
    """``|C1|^2`` from the explicit closed form, without any matrix algebra."""
    k, rho, w = wn.sigma, wn.arho, params.w
    ap, am = alpha_pm(k, rho)
    brace = (math.exp(2 * rho * w) * ap**2 + math.exp(-2 * rho * w) * am**2) * (k * k + rho * rho) + 2 * ap * am * (
        k * k - rho * rho
    )
    return 8.0 * mass_scale * k / (math.pi * brace)


def scaled_denominator_near(params: ModelParams, level: QuasiLevel, delta):
    """``f(sigma0 + delta) * exp(-2 arho0 w)``, evaluated so that it keeps full
    relative accuracy as ``delta -> 0``.

    ``alpha_+`` vanishes at the level; it is formed from exact differences
    against its value there (taken as zero) instead of by direct
    cancellation.  Vectorized over ``delta``.
    """
    u, w = params.u, params.w
    s0, r0 = level.sigma0, level.arho0
    d = np.asarray(delta, dtype=float)
    s = s0 + d
    _check_sigma(u, s)
    # rho - rho0 = -(delta (2 sigma0 + delta)) / (rho + rho0)
    dsq = d * (2.0 * s0 + d)
    r = np.sqrt(r0 * r0 - dsq)
    dr = -dsq / (r + r0)
    half = np.sin(0.5 * d)
    dsin = 2.0 * np.cos(s0 + 0.5 * d) * half
    dcos = -2.0 * np.sin(s0 + 0.5 * d) * half
    cos_s = math.cos(s0) + dcos
    a0 = s0 * math.cos(s0)
    dA = (s * dcos + d * math.cos(s0)) / r + a0 * (dsq / (r * r0 * (r + r0)))
    ap = dsin + dA
    am = np.sin(s) - s * cos_s / r
    f = (np.exp(2.0 * dr * w) * ap**2 + np.exp(-2.0 * (r + r0) * w) * am**2) * u / s**2 + math.exp(
        -2.0 * r0 * w
    ) * 2.0 * ap * am * (2.0 * s**2 - u) / s**2
    return float(f) if f.ndim == 0 else f


def weight_prefactor(level: QuasiLevel) -> float:
    """``4 (1 + a rho0) / (pi a rho0)``: the amplitude prefactor in sigma space."""
    return 4.0 * (1.0 + level.arho0) / (math.pi * level.arho0)


def spectral_weight(params: ModelParams, level: QuasiLevel, sigma):
    """Spectral density in ``sigma`` whose Fourier transform (in ``sigma^2 t``)
    gives the survival amplitude; integrates to about one for peaked levels."""
    delta = np.asarray(sigma, dtype=float) - level.sigma0
    fs = scaled_denominator_near(params, level, delta)
    out = weight_prefactor(level) * math.exp(-2.0 * level.arho0 * params.w) / fs
    return float(out) if np.ndim(out) == 0 else out
