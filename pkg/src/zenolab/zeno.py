"""Inverse-Zeno crossover between the two-pole and Breit-Wigner laws, and
the parameter sweeps for the second time constant tau2."""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from zenolab.errors import NumericalError, RegimeError
from zenolab.model import PhysicalConfig, to_dimensionless
from zenolab.poles import LevelAnalysis, SurvivalParams, analyze_level
from zenolab.quasibound import QuasiLevel, find_levels

log = logging.getLogger(__name__)

ENVELOPE_EFOLDS = 100.0


def phi(t_tilde, sp: SurvivalParams):
    """Crossover function: ``p4_approx / p2 = 1 + 2 (y1/y2) phi``."""
    t = np.asarray(t_tilde, dtype=float)
    val = np.exp(-2.0 * sp.rate2 * t) * np.cos(sp.alpha + sp.beta * t) - math.cos(sp.alpha)
    return float(val) if val.ndim == 0 else val


def _exact_ratio_minus_one(t, sp: SurvivalParams):
    """``(p4 / p2 - 1) / (N r)`` for the exact two-pole law, written so that
    the cancellation at ``t = 0`` is analytic rather than numerical."""
    r, dg = sp.ratio, sp.rate2 - sp.rate1
    t = np.asarray(t, dtype=float)
    env = np.exp(-2.0 * dg * t)
    return r * np.expm1(-4.0 * dg * t) + 2.0 * (env * np.cos(sp.alpha + sp.beta * t) - math.cos(sp.alpha))


@dataclass(frozen=True)
class CrossoverResult:
    exists: bool
    t_star_tilde: float | None
    lhs: float
    rhs: float
    phi_residual: float | None
    t_star_exact_tilde: float | None = None


def criterion_holds(sp: SurvivalParams) -> bool:
    """``2 x2 y2 < -beta tan(alpha)`` in the form cleared of ``cos(alpha)``."""
    ca, sa = math.cos(sp.alpha), math.sin(sp.alpha)
    return 2.0 * sp.rate2 * ca * ca < -sp.beta * sa * ca


def _first_root(fn, t_min: float, step: float, t_end: float) -> float | None:
    chunk = 4096
    start = t_min
    f_prev = float(fn(start))
    if f_prev == 0.0:
        return start
    while start < t_end:
        ts = start + step * np.arange(1, chunk + 1)
        vals = fn(ts)
        sign_change = np.nonzero(np.sign(vals) != np.sign(f_prev))[0]
        if sign_change.size:
            i = int(sign_change[0])
            lo = ts[i - 1] if i > 0 else start
            hi = ts[i]
            return _bisect(fn, lo, hi)
        start, f_prev = float(ts[-1]), float(vals[-1])
    return None


def _bisect(fn, lo: float, hi: float) -> float:
    f_lo = float(fn(lo))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = float(fn(mid))
        if fm == 0.0:
            return mid
        if (fm > 0) == (f_lo > 0):
            lo, f_lo = mid, fm
        else:
            hi = mid
    return lo if abs(float(fn(lo))) <= abs(float(fn(hi))) else hi


def crossover(sp: SurvivalParams) -> CrossoverResult:
    ca = math.cos(sp.alpha)
    lhs = 2.0 * sp.rate2
    rhs = -sp.beta * math.tan(sp.alpha) if ca != 0.0 else math.copysign(math.inf, -sp.beta * math.sin(sp.alpha))
    if not criterion_holds(sp):
        return CrossoverResult(False, None, lhs, rhs, None)
    scale = min(1.0 / lhs, math.pi / (2.0 * abs(sp.beta)))
    t_min = 1e-9 * scale
    step = scale / 64.0
    t_end = ENVELOPE_EFOLDS / lhs
    t_star = _first_root(lambda t: phi(t, sp), t_min, step, t_end)
    if t_star is None:
        raise NumericalError("crossover", "criterion satisfied but no sign change of phi found")
    residual = abs(phi(t_star, sp))
    if residual > 1e-10 * (1.0 + abs(ca)):
        raise NumericalError("crossover", "root refinement stalled", residual)
    t_exact = _first_root(lambda t: _exact_ratio_minus_one(t, sp), t_min, step, t_end)
    return CrossoverResult(True, t_star, lhs, rhs, residual, t_exact)


def tau2_phenomenological(config: PhysicalConfig, level: QuasiLevel) -> float:
    """``m (b - a) / sqrt(2 m (V0 - E0))`` in physical time units."""
    e0 = config.V0 * level.E0_over_V0
    return config.m * (config.b - config.a) / math.sqrt(2.0 * config.m * (config.V0 - e0))


@dataclass(frozen=True)
class SweepRow:
    param: float
    level_index: int
    sigma0: float
    arho0: float
    x1: float
    y1: float
    x2: float
    y2: float
    tau1_tilde: float
    tau2_tilde: float
    tau1: float
    tau2: float
    tau2_phen: float
    inv_sqrt_gap: float


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r2: float
    n: int


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    fit: LinearFit | None
    warnings: list[str] = dataclasses.field(default_factory=list)


def _fit(x: Sequence[float], y: Sequence[float]) -> LinearFit | None:
    if len(x) < 3:
        return None
    res = stats.linregress(np.asarray(x), np.asarray(y))
    return LinearFit(float(res.slope), float(res.intercept), float(res.rvalue**2), len(x))


def _row(param: float, config: PhysicalConfig, an: LevelAnalysis) -> SweepRow:
    ts = an.params.time_scale
    sp = an.survival
    return SweepRow(
        param=param,
        level_index=an.level.index,
        sigma0=an.level.sigma0,
        arho0=an.level.arho0,
        x1=sp.x1,
        y1=sp.y1,
        x2=sp.x2,
        y2=sp.y2,
        tau1_tilde=sp.tau1_tilde,
        tau2_tilde=sp.tau2_tilde,
        tau1=sp.tau1_tilde * ts,
        tau2=sp.tau2_tilde * ts,
        tau2_phen=tau2_phenomenological(config, an.level),
        # [2 m (V0 - E0)]^(-1/2) = a / arho0
        inv_sqrt_gap=config.a / an.level.arho0,
    )


def _nearest(levels: list[QuasiLevel], sigma: float) -> QuasiLevel:
    return min(levels, key=lambda lv: abs(lv.sigma0 - sigma))


def sweep_tau2_vs_w(config: PhysicalConfig, level_index: int, w_values: Iterable[float]) -> SweepResult:
    """tau2 along a barrier-width sweep; the level is followed by nearest
    ``sigma0`` from one point to the next."""
    rows, warnings = [], []
    tracked: float | None = None
    for w in sorted(float(v) for v in w_values):
        cfg = dataclasses.replace(config, b=config.a * (1.0 + w))
        params = to_dimensionless(cfg)
        levels = find_levels(params)
        if tracked is None:
            match = [lv for lv in levels if lv.index == level_index]
            if not match:
                warnings.append(f"w={w:g}: level {level_index} does not exist")
                continue
            level = match[0]
        else:
            if not levels:
                warnings.append(f"w={w:g}: no levels")
                continue
            level = _nearest(levels, tracked)
        tracked = level.sigma0
        try:
            an = analyze_level(params, level)
        except RegimeError as exc:
            warnings.append(f"w={w:g}: {exc}")
            continue
        rows.append(_row(w, cfg, an))
    for msg in warnings:
        log.warning("sweep_tau2_vs_w: %s", msg)
    fit = _fit([r.param for r in rows], [r.tau2 for r in rows])
    return SweepResult(rows, fit, warnings)


def sweep_tau2_vs_gap(configs: Iterable[PhysicalConfig], w: float, include_shallow: bool = False) -> SweepResult:
    """tau2 against ``[2 m (V0 - E0)]^(-1/2)`` over every validated level of
    every configuration, all at barrier width ``w``."""
    rows, warnings = [], []
    for config in configs:
        cfg = dataclasses.replace(config, b=config.a * (1.0 + w))
        params = to_dimensionless(cfg)
        for level in find_levels(params, include_shallow=include_shallow):
            try:
                an = analyze_level(params, level)
            except RegimeError as exc:
                warnings.append(f"V0={cfg.V0:g} level {level.index}: {exc}")
                continue
            rows.append(_row(cfg.V0, cfg, an))
    rows.sort(key=lambda r: r.inv_sqrt_gap)
    for msg in warnings:
        log.info("sweep_tau2_vs_gap: %s", msg)
    fit = _fit([r.inv_sqrt_gap for r in rows], [r.tau2 for r in rows])
    return SweepResult(rows, fit, warnings)
