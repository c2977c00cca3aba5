"""Complex zeros of the truncated spectral denominator and the parameters
of the resulting two-pole survival law."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from zenolab.errors import ClassificationError, NumericalError, RegimeError
from zenolab.model import ModelParams
from zenolab.quasibound import QuasiLevel
from zenolab.spectral import SpectralShape, TaylorCoeffs, shape_constants, taylor_expand

log = logging.getLogger(__name__)

MAX_ITER = 200


@dataclass(frozen=True)
class Pole:
    x: float
    y: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class PoleSet:
    z1: Pole
    z2: Pole
    residual1: float
    residual2: float


@dataclass(frozen=True)
class SurvivalParams:
    x1: float
    y1: float
    x2: float
    y2: float
    alpha: float
    beta: float
    N: float
    tau1_tilde: float
    tau2_tilde: float
    tau0_exact: float
    tau0_approx: float

    @property
    def ratio(self) -> float:
        """``y1 / y2``."""
        return self.y1 / self.y2

    @property
    def rate1(self) -> float:
        return self.x1 * self.y1

    @property
    def rate2(self) -> float:
        return self.x2 * self.y2


def pole2(shape: SpectralShape, level: QuasiLevel) -> Pole:
    """Upper zero of the Breit-Wigner quadratic."""
    k2, r2 = level.sigma0**2, level.arho0**2
    u = k2 + r2
    return Pole(
        x=shape.sigma0 + shape.gamma * (k2 - r2) / u,
        y=shape.gamma * 2.0 * level.sigma0 * level.arho0 / u,
    )


def _initial_guesses(a: np.ndarray) -> np.ndarray:
    """Starting points from the upper convex hull of ``(j, log|a_j|)``."""
    n = len(a) - 1
    logs = np.array([math.log(abs(x)) if x != 0 else -np.inf for x in a])
    hull = [0]
    for j in range(1, n + 1):
        if not np.isfinite(logs[j]):
            continue
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            if (logs[i1] - logs[i0]) * (j - i0) <= (logs[j] - logs[i0]) * (i1 - i0):
                hull.pop()
            else:
                break
        hull.append(j)
    if not np.isfinite(logs[0]):
        hull[0] = 0
    z = []
    offset = 0.4
    for i, k in zip(hull[:-1], hull[1:]):
        m = k - i
        if np.isfinite(logs[i]):
            radius = math.exp((logs[i] - logs[k]) / m)
        else:
            radius = 1e-8 * math.exp(-logs[k] / max(m, 1))
        for t in range(m):
            z.append(radius * np.exp(1j * (2 * math.pi * t / m + offset)))
        offset += 0.7
    return np.array(z, dtype=complex)


def _conjugate_pairs(z: np.ndarray) -> np.ndarray:
    upper = [v for v in z if v.imag > 1e-10 * abs(v)]
    lower = [v for v in z if v.imag < -1e-10 * abs(v)]
    real = [v for v in z if abs(v.imag) <= 1e-10 * abs(v)]
    out = []
    if len(upper) != len(lower):
        raise NumericalError("quartic_roots", "root set is not closed under conjugation")
    remaining = list(lower)
    for v in upper:
        j = int(np.argmin([abs(v - np.conj(q)) for q in remaining]))
        q = remaining.pop(j)
        mid = 0.5 * (v + np.conj(q))
        out.extend([mid, np.conj(mid)])
    out.extend(complex(v.real, 0.0) for v in real)
    return np.array(out, dtype=complex)


def quartic_roots(coeffs) -> np.ndarray:
    """All four roots of ``sum_j coeffs[j] z^j`` (Aberth iteration, Newton polish).

    Real input coefficients give a conjugate-closed root set.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (5,):
        raise ValueError("need exactly five coefficients c0..c4")
    if c[4] == 0:
        raise ValueError("leading coefficient must be non-zero")
    a = c / c[4]
    p = np.polynomial.Polynomial(a)
    dp = p.deriv()
    z = _initial_guesses(a)
    for _ in range(MAX_ITER):
        pz, dpz = p(z), dp(z)
        ratio = np.where(dpz != 0, pz / np.where(dpz != 0, dpz, 1), 0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        z = z - corr
        if np.all(np.abs(corr) <= 1e-14 * np.abs(z)) or np.all(pz == 0):
            break
    else:
        # iterates can cycle at rounding level; only the residual decides
        worst = float(np.max(np.abs(p(z)) / np.maximum(1.0, np.abs(z)) ** 4))
        if worst > 1e-10:
            raise NumericalError("quartic_roots", f"no convergence in {MAX_ITER} iterations", worst)
    # one safeguarded Newton step per root
    for i in range(4):
        d = dp(z[i])
        if d != 0:
            cand = z[i] - p(z[i]) / d
            if abs(p(cand)) < abs(p(z[i])):
                z[i] = cand
    z = _conjugate_pairs(z)
    resid = np.abs(p(z)) / np.maximum(1.0, np.abs(z)) ** 4
    if np.any(resid > 1e-10):
        raise NumericalError("quartic_roots", "residual bound violated", float(resid.max()))
    return z[np.lexsort((z.real, z.imag))]


def pole4(taylor: TaylorCoeffs, level: QuasiLevel, z0: Pole | None = None) -> PoleSet:
    """Upper-half-plane zeros of the quartic truncation, narrow one first."""
    if taylor.order != 4:
        raise ValueError("pole4 needs an order-4 expansion")
    q = np.asarray(taylor.normalized)
    if not q[4] > 0:
        raise RegimeError(f"quartic coefficient c4/c2 = {q[4]:.3g} <= 0: outside the validated regime")
    roots = quartic_roots(q)
    upper = [r for r in roots if r.imag > 0]
    if len(upper) != 2:
        raise RegimeError(
            f"quartic truncation at level {level.index} has real zeros "
            f"({', '.join(f'{r:.4g}' for r in roots)}); no two-pole structure"
        )
    upper.sort(key=lambda r: r.imag)
    poly = np.polynomial.Polynomial(q)
    d1, d2 = upper
    ps = PoleSet(
        z1=Pole(level.sigma0 + d1.real, d1.imag),
        z2=Pole(level.sigma0 + d2.real, d2.imag),
        residual1=float(abs(poly(d1))),
        residual2=float(abs(poly(d2))),
    )
    if z0 is not None:
        rel = abs(ps.z1.z - z0.z) / abs(z0.z)
        if rel > 1e-3:
            log.warning("narrow pole differs from Breit-Wigner pole by %.3e relative", rel)
    return ps


def narrow_pole(taylor: TaylorCoeffs, level: QuasiLevel) -> Pole:
    """The upper-half-plane quartic zero closest to ``sigma0``.

    Defined even where the remaining two zeros are real (or ``c4 < 0``), so
    it can be compared with the Breit-Wigner pole on any peaked level.
    """
    if taylor.order != 4:
        raise ValueError("narrow_pole needs an order-4 expansion")
    roots = quartic_roots(np.asarray(taylor.normalized))
    upper = [r for r in roots if r.imag > 0]
    if not upper:
        raise RegimeError(f"quartic truncation at level {level.index} has no complex zeros")
    d = min(upper, key=abs)
    return Pole(level.sigma0 + d.real, d.imag)


def tau0_closed_form(shape: SpectralShape, level: QuasiLevel) -> tuple[float, float]:
    """Breit-Wigner lifetime in units of ``2 m a^2``: exact (from the pole)
    and the exponential-dominated approximation."""
    z0 = pole2(shape, level)
    exact = 1.0 / (4.0 * z0.x * z0.y)
    s0, r0 = level.sigma0, level.arho0
    # u^2 (1 + arho0) e^{2 arho0 w} / (16 sigma0^3 arho0^3), written through K
    approx = math.exp(shape.log_K + math.log(r0 / (16.0 * s0 * (1.0 + r0))))
    return exact, approx


def survival_params(ps: PoleSet, shape: SpectralShape, level: QuasiLevel) -> SurvivalParams:
    x1, y1, x2, y2 = ps.z1.x, ps.z1.y, ps.z2.x, ps.z2.y
    if not (x1 * y1 > 0 and x2 * y2 > 0):
        raise ClassificationError("survival_params", "pole rates x*y must be positive")
    if y1 > y2:
        raise ClassificationError("survival_params", "narrow pole has the larger width")
    dx, sy = x1 - x2, y1 + y2
    # exp(i alpha) = (z1* - z2)/(z1 - z2*) = conj(D)/D with D = dx + i sy
    alpha = math.atan2(-2.0 * dx * sy, dx * dx - sy * sy)
    if alpha <= -math.pi:
        alpha += 2.0 * math.pi
    beta = dx * (x1 + x2) + (y2 - y1) * sy
    r = y1 / y2
    N = 1.0 / (1.0 + r * r + 2.0 * r * math.cos(alpha))
    tau0_exact, tau0_approx = tau0_closed_form(shape, level)
    return SurvivalParams(
        x1=x1,
        y1=y1,
        x2=x2,
        y2=y2,
        alpha=alpha,
        beta=beta,
        N=N,
        tau1_tilde=1.0 / (4.0 * x1 * y1),
        tau2_tilde=1.0 / (4.0 * x2 * y2),
        tau0_exact=tau0_exact,
        tau0_approx=tau0_approx,
    )


@dataclass(frozen=True)
class LevelAnalysis:
    params: ModelParams
    level: QuasiLevel
    shape: SpectralShape
    taylor: TaylorCoeffs
    z0: Pole
    poles: PoleSet
    survival: SurvivalParams


def analyze_level(params: ModelParams, level: QuasiLevel) -> LevelAnalysis:
    """Full pipeline for one level; raises :class:`RegimeError` outside the
    validated regime."""
    shape = shape_constants(params, level)
    taylor = taylor_expand(params, level, 4)
    z0 = pole2(shape, level)
    ps = pole4(taylor, level, z0)
    sp = survival_params(ps, shape, level)
    if sp.rate2 < 10 * sp.rate1:
        log.info("x2*y2 / x1*y1 = %.3g at level %d", sp.rate2 / sp.rate1, level.index)
    return LevelAnalysis(params, level, shape, taylor, z0, ps, sp)
