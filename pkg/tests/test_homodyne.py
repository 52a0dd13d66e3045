import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import linregress

from sjcm.fock import HilbertConfig
from sjcm.homodyne import analytic_signals, chi_g_tau_n, inverted_variance_peaks, numeric_homodyne
from sjcm.model import derive_parameters, params_from_g, tau

P08 = params_from_g(0.8, 1.0, 1000.0, 0.2)
D08 = derive_parameters(P08).Delta

# scripts/oracles.py
X_MEAN_HALF_PERIOD = 1.5335748602046957
PEAK_G = 168.54608871768052
PEAK_RATIO = 0.9216


def test_initial_values():
    s = analytic_signals(P08, 0.0)
    assert float(s.x_mean) == 0 and float(s.x_var) == 1 and float(s.chi_g) == 0


def test_half_period_mean():
    assert float(analytic_signals(P08, tau(D08) / 2).x_mean) == pytest.approx(X_MEAN_HALF_PERIOD, rel=1e-12)


def test_variance_returns_at_tau_n():
    for n in (1, 2, 3):
        assert float(analytic_signals(P08, tau(D08, n)).x_var) == pytest.approx(1.0, abs=1e-12)
    t = np.linspace(0, tau(D08), 1001)
    assert np.min(analytic_signals(P08, t).x_var) >= 1 - 1e-12


def test_chi_at_tau_n():
    for n in (1, 2):
        assert float(analytic_signals(P08, tau(D08, n)).chi_g) == pytest.approx(chi_g_tau_n(P08, n), rel=1e-10)


@given(st.floats(0.05, 0.98), st.floats(0.0, 0.45), st.floats(0.0, 50.0))
def test_omega_identity(g, G, t):
    p = params_from_g(g, 1.0, 1000.0, G)
    s = analytic_signals(p, t)
    expect = -s.chi_g / (2 * g * (1 - 2 * G))
    assert float(s.chi_omega) == pytest.approx(float(expect), rel=1e-12, abs=1e-12 * abs(float(s.chi_g)) + 1e-300)


def test_peak_value_and_scaling():
    assert inverted_variance_peaks(P08, 1) == pytest.approx(PEAK_G, rel=1e-12)
    assert float(analytic_signals(P08, tau(D08)).inverted_variance_g) == pytest.approx(PEAK_G, rel=1e-10)
    assert inverted_variance_peaks(P08, 2) == pytest.approx(4 * PEAK_G, rel=1e-12)
    r = inverted_variance_peaks(P08, 1, "g") / inverted_variance_peaks(P08, 1, "omega")
    assert r == pytest.approx(PEAK_RATIO, rel=1e-10)
    with pytest.raises(ValueError):
        inverted_variance_peaks(P08, 0)
    with pytest.raises(ValueError):
        inverted_variance_peaks(P08, 1, "lam")


def test_peak_location_converges_to_tau1():
    off = []
    for g in (0.8, 0.9, 0.95, 0.99):
        p = params_from_g(g, 1.0, 1000.0, 0.2)
        T = tau(derive_parameters(p).Delta)
        t = np.linspace(0.5 * T, 1.5 * T, 20001)
        off.append(abs(t[np.argmax(analytic_signals(p, t).inverted_variance_g)] / T - 1))
    assert off[0] < 0.02 and all(a > b for a, b in zip(off, off[1:]))


def test_peak_scaling_exponent():
    # log I_g(tau_1) against log Delta over g in [0.9, 0.99]; -3 up to the
    # slowly varying prefactors, closest at large drive
    gs = np.linspace(0.9, 0.99, 30)
    ps = [params_from_g(g, 1.0, 1000.0, 0.4) for g in gs]
    D = [derive_parameters(p).Delta for p in ps]
    I = [inverted_variance_peaks(p, 1) for p in ps]
    assert abs(linregress(np.log(D), np.log(I)).slope + 3) < 0.05


def test_numeric_matches_closed_form():
    t = np.linspace(0, 2 * tau(D08), 65)
    num = numeric_homodyne(P08, None, t)
    ana = analytic_signals(P08, t)
    assert num.residual < 1e-6
    assert np.max(np.abs(num.x_mean - ana.x_mean)) < 1e-8
    assert np.max(np.abs(num.x_var - ana.x_var)) < 1e-8
    scale = np.max(np.abs(ana.chi_g))
    assert np.max(np.abs(num.chi_g - ana.chi_g)) / scale < 1e-5
    assert np.max(np.abs(num.chi_omega - ana.chi_omega)) / np.max(np.abs(ana.chi_omega)) < 1e-4
    assert np.all(num.inverted_variance_g <= num.qfi_g * (1 + 1e-9))


def test_numeric_peak():
    T = tau(D08)
    num = numeric_homodyne(P08, None, [T], with_omega=False)
    assert float(num.inverted_variance_g[0]) == pytest.approx(PEAK_G, rel=1e-2)


def test_vacuum_mean_vanishes():
    t = np.linspace(0, 2 * tau(D08), 33)
    s = numeric_homodyne(P08, HilbertConfig(60), t, s0="vacuum", with_qfi=False, with_omega=False)
    assert np.max(np.abs(s.x_mean)) < 1e-12


def test_explicit_state_fixes_cutoff():
    v = np.zeros(50, complex)
    v[0] = 1
    s = numeric_homodyne(P08, None, [1.0], s0=v, with_omega=False)
    assert s.n_max == 50 and math.isnan(s.residual)
