"""Survival probability: single-pole (Breit-Wigner), two-pole, and a direct
quadrature of the spectral integral used as an independent oracle.

All times are dimensionless, ``t_tilde = t / (2 m a^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import spherical_jn

from zenolab.continuum import scaled_denominator_near, weight_prefactor
from zenolab.errors import NumericalError
from zenolab.model import ModelParams
from zenolab.poles import Pole, SurvivalParams
from zenolab.quasibound import QuasiLevel, find_levels


@dataclass(frozen=True)
class TimeGrid:
    t_tilde_values: np.ndarray
    time_scale: float = 1.0

    def __post_init__(self) -> None:
        t = np.asarray(self.t_tilde_values, dtype=float)
        if t.ndim != 1 or np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be a strictly ascending 1-d sequence")
        object.__setattr__(self, "t_tilde_values", t)

    @classmethod
    def linspace(cls, t_max: float, samples: int, time_scale: float = 1.0) -> TimeGrid:
        if samples < 2:
            raise ValueError("need at least two samples")
        return cls(np.linspace(0.0, t_max, samples), time_scale)

    @property
    def t_physical(self) -> np.ndarray:
        return self.t_tilde_values * self.time_scale


def _as_out(x):
    return float(x) if np.ndim(x) == 0 else x


def p2(t_tilde, z0: Pole):
    t = np.asarray(t_tilde, dtype=float)
    return _as_out(np.exp(-4.0 * z0.x * z0.y * t))


def p4(t_tilde, sp: SurvivalParams):
    t = np.asarray(t_tilde, dtype=float)
    r = sp.ratio
    g1, g2 = sp.rate1, sp.rate2
    val = sp.N * (
        np.exp(-4.0 * g1 * t)
        + r * r * np.exp(-4.0 * g2 * t)
        + 2.0 * r * np.exp(-2.0 * (g1 + g2) * t) * np.cos(sp.alpha + sp.beta * t)
    )
    return _as_out(val)


def p4_approx(t_tilde, sp: SurvivalParams):
    t = np.asarray(t_tilde, dtype=float)
    r = sp.ratio
    val = np.exp(-4.0 * sp.rate1 * t) * (
        1.0 + 2.0 * r * (np.exp(-2.0 * sp.rate2 * t) * np.cos(sp.alpha + sp.beta * t) - math.cos(sp.alpha))
    )
    return _as_out(val)


def short_time_coefficients(sp: SurvivalParams) -> tuple[float, float]:
    """``(a1, a2)`` with ``p4(t) = 1 + a1 t + a2 t^2 + O(t^3)``, from the exact
    first and second derivatives at ``t = 0``."""
    r = sp.ratio
    g1, g2 = sp.rate1, sp.rate2
    c = 2.0 * (g1 + g2)
    ca, sa = math.cos(sp.alpha), math.sin(sp.alpha)
    b = sp.beta
    d1 = math.fsum([-4.0 * g1, -4.0 * g2 * r * r, -2.0 * r * c * ca, -2.0 * r * b * sa])
    d2 = math.fsum(
        [
            16.0 * g1 * g1,
            16.0 * g2 * g2 * r * r,
            2.0 * r * c * c * ca,
            -2.0 * r * b * b * ca,
            4.0 * r * c * b * sa,
        ]
    )
    return sp.N * d1, 0.5 * sp.N * d2


@dataclass(frozen=True)
class QuadratureOptions:
    abs_tol: float = 1e-10
    max_subdivisions: int = 4000
    nodes: int = 32
    sigma_min_factor: float = 1e-6
    guard: float = 1e-9
    window: str = "level"

    def __post_init__(self) -> None:
        if self.window not in ("level", "full"):
            raise ValueError(f"unknown window {self.window!r}")


@dataclass(frozen=True)
class OracleResult:
    t_tilde: np.ndarray
    raw: np.ndarray
    renormalized: np.ndarray
    p0_raw: float
    error_estimate: float = field(default=0.0)


class _Panels:
    """Legendre expansions of ``h(s) = 1 / (2 sigma f)`` on panels of the
    energy-like variable ``s = sigma^2 - sigma0^2``.

    With ``h`` represented by a polynomial on each panel the oscillatory
    factor ``exp(-i s t)`` is integrated exactly (Filon-Legendre), so the
    cost does not grow with ``t``.
    """

    def __init__(self, params: ModelParams, level: QuasiLevel, opts: QuadratureOptions):
        self.params, self.level, self.opts = params, level, opts
        self.x, self.wts = np.polynomial.legendre.leggauss(opts.nodes)
        n = np.arange(opts.nodes)
        # projection matrix: coefficients = proj @ h(nodes)
        vand = np.polynomial.legendre.legvander(self.x, opts.nodes - 1)
        self.proj = ((2 * n + 1) / 2.0)[:, None] * (vand * self.wts[:, None]).T

    def h(self, s: np.ndarray) -> np.ndarray:
        s0 = self.level.sigma0
        delta = s / (s0 + np.sqrt(s0 * s0 + s))
        return 1.0 / (2.0 * (s0 + delta) * scaled_denominator_near(self.params, self.level, delta))

    def coefficients(self, a: float, b: float) -> np.ndarray:
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        return self.proj @ self.h(mid + half * self.x)

    def peak_width(self) -> float:
        """Half-width of the resonance in ``s``, estimated from ``f`` alone."""
        step = 1e-3
        f0 = scaled_denominator_near(self.params, self.level, 0.0)
        fp = scaled_denominator_near(self.params, self.level, np.array([-step, step]))
        curv = 0.5 * (fp[0] + fp[1]) - f0
        width = step * math.sqrt(f0 / curv) if curv > 0 else step
        return 2.0 * self.level.sigma0 * min(width, step)

    def window(self) -> tuple[float, float]:
        """Integration limits in ``sigma``.

        The spectrum of the chosen level is taken as zero away from it, so
        with ``window="level"`` the range stops halfway to each neighbouring
        level (where the same ``1/f`` has its own Lorentzian peaks).
        """
        root_u = math.sqrt(self.params.u)
        lo = self.opts.sigma_min_factor * root_u
        hi = root_u * (1.0 - self.opts.guard)
        if self.opts.window == "level":
            others = [lv.sigma0 for lv in find_levels(self.params) if lv.index != self.level.index]
            below = [s for s in others if s < self.level.sigma0]
            above = [s for s in others if s > self.level.sigma0]
            if below:
                lo = 0.5 * (max(below) + self.level.sigma0)
            if above:
                hi = 0.5 * (min(above) + self.level.sigma0)
        return lo, hi

    def breakpoints(self) -> np.ndarray:
        s0 = self.level.sigma0
        sig_lo, sig_hi = self.window()
        lo, hi = sig_lo**2 - s0 * s0, sig_hi**2 - s0 * s0
        base = self.peak_width() / 16.0
        pts = [0.0]
        for sign, limit in ((1.0, hi), (-1.0, -lo)):
            d = base
            while d < limit:
                pts.append(sign * d)
                d *= 2.0
        if sig_lo == self.opts.sigma_min_factor * math.sqrt(self.params.u):
            # h ~ 1/sigma has an integrable singularity at sigma -> 0
            edge = min(pts)
            pts.extend(lo + (edge - lo) * 2.0 ** -np.arange(1, 40))
        pts.extend([lo, hi])
        return np.unique(np.array(pts))

    def build(self) -> tuple[list[tuple[float, float, np.ndarray]], float]:
        work = list(zip(self.breakpoints()[:-1], self.breakpoints()[1:]))
        done = []
        total = 0.0
        rough = []
        for a, b in work:
            c = self.coefficients(a, b)
            rough.append((a, b, c))
            total += abs(c[0]) * (b - a)
        # refine panels whose Legendre tail is not negligible
        tol = self.opts.abs_tol
        budget = self.opts.max_subdivisions
        queue = rough
        err = 0.0
        while queue:
            a, b, c = queue.pop()
            tail = (abs(c[-1]) + abs(c[-2])) * (b - a)
            if tail > 0.1 * tol * total and budget > 0:
                budget -= 1
                m = 0.5 * (a + b)
                queue.append((a, m, self.coefficients(a, m)))
                queue.append((m, b, self.coefficients(m, b)))
                continue
            err += tail
            done.append((a, b, c))
        done.sort(key=lambda item: item[0])
        return done, (err / total if total > 0 else 0.0)


def _amplitudes(panels, t: np.ndarray) -> np.ndarray:
    nmax = len(panels[0][2])
    n = np.arange(nmax)
    phase_n = (-1j) ** n
    out = np.zeros(len(t), dtype=complex)
    for a, b, c in panels:
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        omega = half * t
        jn = spherical_jn(n[:, None], np.abs(omega)[None, :])
        # j_n(-x) = (-1)^n j_n(x)
        jn = np.where((omega[None, :] < 0) & (n[:, None] % 2 == 1), -jn, jn)
        series = (c * phase_n) @ jn
        out += 2.0 * half * np.exp(-1j * mid * t) * series
    return out


def p_oracle(t_tilde, params: ModelParams, level: QuasiLevel, opts: QuadratureOptions | None = None) -> OracleResult:
    """Survival probability by direct quadrature of the spectral integral.

    Accepts negative times.  ``raw`` is the integral with its analytic
    prefactor; ``renormalized`` divides by the raw value at ``t = 0``.
    """
    opts = opts or QuadratureOptions()
    t = np.atleast_1d(np.asarray(t_tilde, dtype=float))
    panels, rel_err = _Panels(params, level, opts).build()
    scale = weight_prefactor(level) * math.exp(-2.0 * level.arho0 * params.w)
    amp = scale * _amplitudes(panels, np.concatenate([[0.0], t]))
    prob = np.abs(amp) ** 2
    p0 = float(prob[0])
    achieved = 2.0 * rel_err * p0
    if not np.all(np.isfinite(prob)) or achieved > opts.abs_tol:
        raise NumericalError("p_oracle", "spectral quadrature did not converge", achieved)
    return OracleResult(t_tilde=t, raw=prob[1:], renormalized=prob[1:] / p0, p0_raw=p0, error_estimate=achieved)
