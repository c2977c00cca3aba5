import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import integrate

import oracles
from zenolab.continuum import (
    WaveNumbers,
    c1_squared_closed_form,
    match_coefficients,
    scaled_denominator_near,
    spectral_denominator,
    spectral_denominator_from_coefficients,
    spectral_weight,
    wavefunction_at,
    weight_prefactor,
)
from zenolab.errors import DomainError
from zenolab.model import ModelParams
from zenolab.quasibound import find_levels
from zenolab.spectral import shape_constants

U0 = 4 * math.pi**2


def _coeffs(u, w, s, mass_scale=1.0):
    p = ModelParams(u, w)
    wn = WaveNumbers.from_sigma(p, s)
    return p, wn, match_coefficients(p, wn, mass_scale)


@st.composite
def configs(draw):
    root_u = draw(st.floats(min_value=1.0, max_value=14.0))
    w = draw(st.floats(min_value=0.1, max_value=2.0))
    frac = draw(st.floats(min_value=0.02, max_value=0.98))
    return root_u**2, w, frac * root_u


@given(configs())
def test_outgoing_and_incoming_amplitudes_equal(cfg):
    u, w, s = cfg
    _, _, c = _coeffs(u, w, s)
    assert abs(c.C3) == pytest.approx(abs(c.D3), rel=1e-9)


@given(configs())
def test_continuum_normalization(cfg):
    u, w, s = cfg
    _, _, c = _coeffs(u, w, s, mass_scale=0.7)
    assert abs(c.C3) ** 2 * 2 * math.pi * s / 0.7 == pytest.approx(1.0, rel=1e-12)
    assert c.C1.imag == 0 and c.C1.real > 0


def test_normalization_example():
    _, _, c = _coeffs(U0, 1.0, 2.0)
    assert abs(c.C3) ** 2 * 2 * math.pi * 2.0 == pytest.approx(1.0, rel=1e-12)


def test_c1_matrix_path_matches_closed_form():
    p, wn, c = _coeffs(U0, 1.0, 2.0)
    expected = oracles.c1_squared_brace(U0, 1.0, 2.0)
    assert abs(c.C1) ** 2 == pytest.approx(expected, rel=1e-10)
    assert c1_squared_closed_form(p, wn) == pytest.approx(expected, rel=1e-12)


@given(configs())
def test_wavefunction_continuity(cfg):
    u, w, s = cfg
    assume(math.sqrt(u - s * s) * w < 20)
    _, wn, c = _coeffs(u, w, s)
    for x in (1.0, 1.0 + w):
        lo, hi = math.nextafter(x, 0), math.nextafter(x, 10)
        scale = max(abs(wavefunction_at(c, wn, x)), abs(c.C1), abs(c.C3))
        assert abs(wavefunction_at(c, wn, lo) - wavefunction_at(c, wn, hi)) <= 1e-10 * scale
        dscale = scale * max(1.0, s, math.sqrt(u))
        d_lo = wavefunction_at(c, wn, lo, derivative=True)
        d_hi = wavefunction_at(c, wn, hi, derivative=True)
        assert abs(d_lo - d_hi) <= 1e-10 * dscale


def test_wavefunction_vanishes_at_origin():
    _, wn, c = _coeffs(U0, 1.0, 2.0)
    assert wavefunction_at(c, wn, 0.0) == 0


def test_negative_radius_rejected():
    _, wn, c = _coeffs(U0, 1.0, 2.0)
    with pytest.raises(DomainError):
        wavefunction_at(c, wn, -0.1)


@pytest.mark.parametrize("s", [0.0, -1.0, 2 * math.pi, 7.0])
def test_sigma_outside_domain(s):
    with pytest.raises(DomainError):
        spectral_denominator(ModelParams(U0, 1.0), s)


def test_guard_near_barrier_top():
    p = ModelParams(U0, 1.0)
    with pytest.raises(DomainError):
        spectral_denominator(p, math.sqrt(U0) * (1 - 1e-14))


@pytest.mark.parametrize("root_u", [2.0, 2 * math.pi, 3 * math.pi, 11.0])
@pytest.mark.parametrize("w", [0.3, 1.0])
def test_denominator_positive_on_scan(root_u, w):
    s = np.linspace(0.01 * root_u, 0.99 * root_u, 1000)
    f = spectral_denominator(ModelParams(root_u**2, w), s)
    assert np.all(np.isfinite(f)) and np.all(f > 0)


def test_denominator_matches_mpmath_transcription():
    s = math.pi / 2
    assert spectral_denominator(ModelParams(U0, 1.0), s) == pytest.approx(float(oracles.mp_f(U0, 1.0, s)), rel=1e-13)


@given(configs())
def test_two_paths_to_denominator(cfg):
    u, w, s = cfg
    p, _, c = _coeffs(u, w, s)
    assert spectral_denominator_from_coefficients(c) == pytest.approx(spectral_denominator(p, s), rel=1e-10)


@pytest.mark.parametrize("w", [0.6, 1.0, 1.4])
def test_denominator_at_level_equals_k_gamma_squared(w):
    p = ModelParams(9 * math.pi**2, w)
    for lv in find_levels(p, include_shallow=False):
        sh = shape_constants(p, lv)
        with mp.workdps(40):
            exact = oracles.mp_f(p.u, w, oracles.mp_level(p.u, lv.index, 40))
            k_gamma2 = mp.exp(mp.mpf(sh.log_K)) * mp.mpf(sh.gamma) ** 2
            assert float(abs(exact / k_gamma2 - 1)) < 1e-10


def test_scaled_denominator_keeps_precision_near_level():
    p = ModelParams(16 * math.pi**2, 1.4)
    lv = find_levels(p)[0]
    for d in (0.0, 1e-14, 1e-10, 1e-6, 1e-3, 0.2):
        with mp.workdps(60):
            s0 = oracles.mp_level(p.u, 1, 60)
            exact = oracles.mp_f(p.u, p.w, s0 + d) * mp.exp(-2 * mp.mpf(lv.arho0) * p.w)
        assert scaled_denominator_near(p, lv, d) == pytest.approx(float(exact), rel=1e-9)


def test_weight_peaks_at_level():
    p = ModelParams(U0, 1.0)
    lv = find_levels(p)[0]
    sh = shape_constants(p, lv)
    g, eps = sh.gamma, sh.epsilon
    s = lv.sigma0 + np.linspace(-10 * g, 10 * g, 20001)
    weights = spectral_weight(p, lv, s)
    assert np.all(weights >= 0)
    # the maximum is displaced from sigma0 by eps/2, which is comparable to gamma
    peak = s[np.argmax(weights)]
    assert peak == pytest.approx(lv.sigma0 + eps / 2, abs=0.01 * g)
    lorentz_max = weight_prefactor(lv) / (sh.K * (g * g - eps * eps / 4))
    assert np.max(weights) == pytest.approx(lorentz_max, rel=1e-3)


def test_weight_integrates_to_one_when_peaked():
    p = ModelParams(U0, 1.0)
    lv = find_levels(p)[0]
    g = shape_constants(p, lv).gamma
    assert g < 1e-3
    # only one level below the midpoint to the next level, per the spectrum's support
    top = 0.5 * (lv.sigma0 + find_levels(p)[1].sigma0)
    pts = [lv.sigma0 + k * g for k in (-1e3, -30, -3, 0, 3, 30, 1e3)]
    total = integrate.quad(lambda x: spectral_weight(p, lv, x), 1e-6 * 2 * math.pi, top, points=pts, limit=400)[0]
    assert 0.98 <= total <= 1.02
