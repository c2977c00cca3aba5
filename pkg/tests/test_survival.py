import math

import mpmath as mp
import numpy as np
import pytest
import sympy as sp_

import oracles
from conftest import validated_analyses
from zenolab.errors import NumericalError
from zenolab.model import ModelParams
from zenolab.poles import Pole, SurvivalParams
from zenolab.quasibound import find_levels
from zenolab.survival import (
    QuadratureOptions,
    TimeGrid,
    p2,
    p4,
    p4_approx,
    p_oracle,
    short_time_coefficients,
)

ANALYSES, _ = validated_analyses()


def _aid(an):
    return f"rootu={math.sqrt(an.params.u) / math.pi:.0f}pi-w={an.params.w:g}-n={an.level.index}"


PEAKED = [an for an in ANALYSES if an.shape.gamma < 1e-3]


def test_time_grid():
    g = TimeGrid.linspace(2.0, 5, time_scale=3.0)
    assert g.t_tilde_values.tolist() == [0, 0.5, 1.0, 1.5, 2.0]
    assert g.t_physical[-1] == 6.0
    with pytest.raises(ValueError):
        TimeGrid(np.array([0.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        TimeGrid.linspace(1.0, 1)


def test_p2_identities():
    z = Pole(3.0, 1e-3)
    tau = 1 / (4 * z.x * z.y)
    assert p2(0.0, z) == 1.0
    assert p2(tau, z) == pytest.approx(math.exp(-1), rel=1e-12)
    for t in (0.3, 7.0, 40.0):
        assert p2(2 * t, z) == pytest.approx(p2(t, z) ** 2, rel=1e-12)


@pytest.mark.parametrize("an", ANALYSES, ids=_aid)
def test_closed_forms_start_at_one(an):
    sp = an.survival
    assert p4(0.0, sp) == pytest.approx(1.0, abs=1e-15)
    assert p4_approx(0.0, sp) == 1.0


@pytest.mark.parametrize("an", ANALYSES, ids=_aid)
def test_closed_form_ranges_and_agreement(an):
    sp = an.survival
    r = sp.ratio
    t = np.linspace(0, 3 * sp.tau1_tilde, 4001)
    t = np.union1d(t, np.linspace(0, 20 * sp.tau2_tilde, 2001))
    v4, va = p4(t, sp), p4_approx(t, sp)
    for v in (v4, va, p2(t, an.poles.z1)):
        assert np.all(np.isfinite(v)) and np.all(v > 0) and np.all(v <= 1 + 2 * r + 1e-15)
    assert np.max(np.abs(va - v4)) < 5 * r * r + 1e-14
    late = np.linspace(20 * sp.tau2_tilde, 3 * sp.tau1_tilde, 500)
    assert np.all(np.abs(p4(late, sp) / p2(late, an.poles.z1) - 1) < 3 * r)


def test_single_exponential_limit():
    sp = SurvivalParams(3.0, 1e-14, 4.0, 0.4, 0.5, 7.0, 1.0, 0, 0, 0, 0)
    sp = SurvivalParams(**{**sp.__dict__, "N": 1 / (1 + sp.ratio**2 + 2 * sp.ratio * math.cos(0.5))})
    t = np.linspace(0, 1e12, 50)
    assert np.allclose(p4(t, sp), p2(t, Pole(3.0, 1e-14)), rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("an", ANALYSES, ids=_aid)
def test_no_linear_term(an, tol):
    a1, a2 = short_time_coefficients(an.survival)
    assert abs(a1) <= tol["linear_term"] * abs(a2)
    assert a2 < 0


def test_linear_term_vanishes_symbolically():
    x1, x2, y1, y2 = sp_.symbols("x1 x2 y1 y2", positive=True)
    dx, sy = x1 - x2, y1 + y2
    cos_a = (dx**2 - sy**2) / (dx**2 + sy**2)
    sin_a = -2 * dx * sy / (dx**2 + sy**2)
    r = y1 / y2
    g1, g2 = x1 * y1, x2 * y2
    beta = x1**2 - x2**2 + y2**2 - y1**2
    d1 = -4 * g1 - 4 * g2 * r**2 - 2 * r * 2 * (g1 + g2) * cos_a - 2 * r * beta * sin_a
    assert sp_.simplify(sp_.together(d1)) == 0


def _mp_law(sp):
    return oracles.mp_p4(sp.x1, sp.y1, sp.x2, sp.y2, sp.alpha, sp.beta)


@pytest.mark.parametrize("an", ANALYSES, ids=_aid)
def test_short_time_coefficients_match_series(an):
    sp = an.survival
    a1, a2 = short_time_coefficients(sp)
    law = _mp_law(sp)
    with mp.workdps(50):
        assert float(mp.diff(law, 0, 2) / 2) == pytest.approx(a2, rel=1e-10)
        assert abs(float(mp.diff(law, 0, 1))) <= 1e-12 * abs(a2)


@pytest.mark.parametrize("an", ANALYSES, ids=_aid)
def test_zeno_time_from_parabola_fit(an):
    sp = an.survival
    _, a2 = short_time_coefficients(sp)
    tz = 1 / math.sqrt(-a2)
    law = _mp_law(sp)
    with mp.workdps(50):
        ts = [mp.mpf(0.01 * sp.tau2_tilde) * i / 199 for i in range(200)]
        # least squares for 1 - P = (t / tau_Z)^2
        coef = sum(t * t * (1 - law(t)) for t in ts) / sum(t**4 for t in ts)
        fitted = float(1 / mp.sqrt(coef))
    assert fitted == pytest.approx(tz, rel=1e-2)


# -- quadrature oracle -------------------------------------------------------


@pytest.mark.parametrize("an", PEAKED, ids=_aid)
def test_oracle_starts_near_one(an):
    res = p_oracle([0.0], an.params, an.level)
    assert 0.98 <= res.p0_raw <= 1.02
    assert res.renormalized[0] == 1.0
    assert res.error_estimate <= 1e-10


@pytest.mark.parametrize("an", PEAKED[::2], ids=_aid)
def test_oracle_is_even(an, tol):
    t = np.linspace(0.01, 5 * an.survival.tau2_tilde, 20)
    plus = p_oracle(t, an.params, an.level).raw
    minus = p_oracle(-t, an.params, an.level).raw
    assert np.max(np.abs(plus - minus)) <= tol["oracle_evenness"]


@pytest.mark.parametrize("an", [a for a in PEAKED if a.shape.gamma < 1e-4], ids=_aid)
def test_oracle_tracks_two_pole_law(an):
    sp = an.survival
    t = np.concatenate([np.linspace(0, 5 * sp.tau2_tilde, 100), np.linspace(0, 3 * sp.tau1_tilde, 200)])
    res = p_oracle(t, an.params, an.level)
    diff = np.abs(res.renormalized - p4(t, sp))
    # the gap is set by the non-resonant weight inside the window, which
    # shows up as p0_raw - 1, plus the O(gamma) error of the pole law
    background = res.p0_raw - 1.0
    assert np.max(diff) <= 4 * background + 20 * an.shape.gamma + 1e-9


def test_oracle_against_qawo():
    p = ModelParams(4 * math.pi**2, 1.0)
    levels = find_levels(p)
    lv = levels[1]
    lo = 0.5 * (levels[0].sigma0 + lv.sigma0)
    hi = math.sqrt(p.u) * (1 - 1e-9)
    t = np.array([0.0, 0.05, 0.3, 2.0, 40.0])
    res = p_oracle(t, p, lv)
    for ti, val in zip(t, res.raw):
        ref = oracles.survival_by_qawo(p.u, p.w, lv.sigma0, lv.arho0, ti, lo, hi)
        assert val == pytest.approx(ref, rel=1e-6, abs=1e-9)


def test_full_window_counts_every_resonance():
    # with no cut-off the other level's Lorentzian adds its own weight
    p = ModelParams(4 * math.pi**2, 1.0)
    lv = find_levels(p)[0]
    res = p_oracle([0.0], p, lv, QuadratureOptions(window="full"))
    narrow = p_oracle([0.0], p, lv)
    assert narrow.p0_raw == pytest.approx(1.0, abs=1e-2)
    assert res.p0_raw > 1.5


def test_oracle_reports_failure():
    p = ModelParams(9 * math.pi**2, 1.0)
    lv = find_levels(p)[2]
    with pytest.raises(NumericalError) as info:
        p_oracle([0.0, 1.0], p, lv, QuadratureOptions(abs_tol=1e-30, max_subdivisions=0, nodes=8))
    assert info.value.achieved is not None and info.value.achieved > 1e-30


def test_bad_window():
    with pytest.raises(ValueError):
        QuadratureOptions(window="half")
