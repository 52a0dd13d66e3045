import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sjcm.dynamics import Spectrum, TimeSeries, evolve_observable, propagator, time_grid
from sjcm.errors import DimMismatch, NonHermitian
from sjcm.fock import HilbertConfig, build_operators, make_state, moment
from sjcm.hamiltonians import HamiltonianKind, auto_cutoff, effective_np, full_sjcm
from sjcm.homodyne import analytic_signals
from sjcm.model import derive_parameters, params_from_g, tau

P08 = params_from_g(0.8, 1.0, 1000.0, 0.2)


def random_hermitian(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def test_propagator_basics():
    rng = np.random.default_rng(1)
    H = random_hermitian(rng, 30)
    sp = Spectrum(H)
    assert np.allclose(sp.unitary(0.0), np.eye(30), atol=1e-12)
    U = propagator(H, 0.7, HamiltonianKind.FullSJCM, sp)
    assert U.source is HamiltonianKind.FullSJCM and U.t == 0.7
    assert np.max(np.abs(U.U.conj().T @ U.U - np.eye(30))) < 1e-10
    assert np.max(np.abs(sp.unitary(0.3) @ sp.unitary(0.4) - U.U)) < 1e-10


def test_diagonal_hamiltonian():
    e = np.array([0.0, 1.5, -2.0, 3.25])
    U = propagator(np.diag(e), 1.3).U
    assert np.allclose(U, np.diag(np.exp(-1j * e * 1.3)), atol=1e-14)


def test_non_hermitian_rejected():
    with pytest.raises(NonHermitian):
        Spectrum(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_observables_identity_energy_norm():
    c = HilbertConfig(auto_cutoff(P08))
    H = effective_np(P08, "down", c)
    o = build_operators(c)
    s0 = make_state("phi_std", c)
    ts = evolve_observable(H, s0, {"id": o.identity, "H": H}, np.linspace(0, 10, 41))
    assert np.allclose(ts["id"], 1.0, atol=1e-10)
    assert np.allclose(ts["H"], ts["H"][0], atol=1e-10)
    assert np.allclose(ts["norm"], 1.0, atol=1e-10)
    with pytest.raises(DimMismatch):
        evolve_observable(H, s0[:-1], [o.X], [0.0])


def test_matches_closed_form_quadrature():
    c = HilbertConfig(auto_cutoff(P08))
    o = build_operators(c)
    t = time_grid(derive_parameters(P08).Delta, 1, 128)
    ts = evolve_observable(effective_np(P08, "down", c), make_state("phi_std", c), {"X": o.X}, t)
    assert np.max(np.abs(ts["X"] - analytic_signals(P08, t).x_mean)) < 1e-8


def test_heisenberg_cross_check():
    rng = np.random.default_rng(7)
    d = derive_parameters(P08)
    n = 240
    c = HilbertConfig(n)
    o = build_operators(c)
    k = n // 8
    v = np.zeros(n, complex)
    v[:k] = rng.normal(size=k) + 1j * rng.normal(size=k)
    v /= np.linalg.norm(v)
    t = np.linspace(0, 2 * tau(d.Delta), 65)
    s = math.sqrt(d.Delta)
    x = evolve_observable(effective_np(P08, "down", c), v, {"X": o.X}, t)["X"]
    xh = np.cos(s * t / 2) * moment(o.X, v).real + 4 * (d.alpha + 0.4) / s * np.sin(s * t / 2) * moment(o.P, v).real
    assert np.max(np.abs(x - xh)) < 1e-8


@given(st.floats(0.0, 50.0), st.integers(0, 2**31))
def test_time_reversal(t, seed):
    rng = np.random.default_rng(seed)
    c = HilbertConfig(12, include_qubit=True)
    sp = Spectrum(full_sjcm(params_from_g(0.5, 1.0, 20.0, 0.1), c))
    s0 = rng.normal(size=24) + 1j * rng.normal(size=24)
    s0 /= np.linalg.norm(s0)
    back = sp.unitary(-t) @ (sp.unitary(t) @ s0)
    assert np.max(np.abs(back - s0)) < 1e-10


def test_time_series_validation():
    with pytest.raises(ValueError):
        TimeSeries(np.array([0.0, 1.0, 1.0]), {})
    with pytest.raises(ValueError):
        TimeSeries(np.array([0.0, 1.0]), {"x": [1.0]})


def test_time_grid():
    t = time_grid(4.0, periods=2, points_per_period=8)
    assert len(t) == 17 and t[0] == 0 and t[-1] == pytest.approx(2 * math.pi)
