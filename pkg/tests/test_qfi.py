import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sjcm.errors import DimMismatch, StepUnderflow
from sjcm.fock import HilbertConfig, build_operators, make_state, moment
from sjcm.hamiltonians import auto_cutoff, effective_np
from sjcm.homodyne import numeric_homodyne
from sjcm.model import derive_parameters, params_from_g, tau
from sjcm.qfi import (analytic_N_coefficients, closure_decomposition, commutator, dalpha_dg, generator,
                      qfi_analytic, qfi_numeric_g, qfi_tau_n, qfi_value, quadrature_family)

P08 = params_from_g(0.8, 1.0, 1000.0, 0.2)


def test_family_reproduces_effective_model():
    c = HilbertConfig(60)
    dec = closure_decomposition(P08, c)
    k = 50      # X^2 + P^2 differs from 2n + 1 only in the top level
    assert np.max(np.abs((dec.H - effective_np(P08, "down", c))[:k, :k])) < 1e-12
    o = build_operators(c)
    assert np.max(np.abs(dec.M + 1j * commutator(*quadrature_family(P08, c)))) < 1e-12
    assert np.max(np.abs(dec.M - (-4 * 0.2) * (o.X @ o.P + o.P @ o.X))[:k, :k]) < 1e-12


def test_closure_relation_interior():
    c = HilbertConfig(120)
    dec = closure_decomposition(P08, c)
    k = 60
    L = commutator(dec.H, dec.Upsilon) - math.sqrt(dec.Delta) * dec.Upsilon
    assert np.linalg.norm(L[:k, :k]) / np.linalg.norm(dec.Upsilon[:k, :k]) < 1e-6


def test_N_structure():
    # N carries both X^2 and P^2: N = -16 G alpha X^2 + 16 G (alpha + 2G) P^2 + const
    c = HilbertConfig(80)
    dec = closure_decomposition(P08, c)
    o = build_operators(c)
    cX, cP = analytic_N_coefficients(dec.alpha, 0.2)
    R = dec.N - cX * (o.X @ o.X).real - cP * (o.P @ o.P).real
    k = 60
    assert np.max(np.abs(R[:k, :k] - R[0, 0] * np.eye(k))) < 1e-10


def test_zero_drive_commuting_family():
    p0 = params_from_g(0.8, 1.0, 1000.0, 0.0)
    c = HilbertConfig(60)
    dec = closure_decomposition(p0, c)
    assert not dec.M.any() and not dec.N.any()
    H0, H1 = quadrature_family(p0, c)
    assert np.array_equal(generator(p0, 3.0, "analytic", c), H1 * 3.0)
    hn = generator(p0, 3.0, "numeric", c)
    assert np.max(np.abs(hn - 3.0 * H1)[:20, :20]) < 1e-6


def test_generator_at_zero_time():
    c = HilbertConfig(40)
    for m in ("analytic", "numeric"):
        assert np.max(np.abs(generator(P08, 0.0, m, c))) == 0


@pytest.mark.parametrize("x", [0.5, 2.0, 2 * math.pi, 3 * math.pi, 4 * math.pi])
def test_generator_numeric_matches_analytic(x):
    # the support of the lowest 30 levels reaches ~4x further up during a
    # period, so 240 levels keep that block free of cutoff effects
    c = HilbertConfig(240)
    t = x / math.sqrt(derive_parameters(P08).Delta)
    hn = generator(P08, t, "numeric", c)
    ha = generator(P08, t, "analytic", c)
    k = 30
    assert np.linalg.norm((hn - ha)[:k, :k]) / np.linalg.norm(ha[:k, :k]) < 1e-4
    assert np.max(np.abs(hn - hn.conj().T)) < 1e-8
    assert np.max(np.abs(ha - ha.conj().T)) < 1e-8


def test_generator_errors():
    c = HilbertConfig(20)
    with pytest.raises(StepUnderflow):
        generator(P08, 1.0, "numeric", c, step=1e-16)
    with pytest.raises(ValueError):
        generator(P08, 1.0, "symbolic", c)


def test_term_dominance_grows_toward_criticality():
    c = HilbertConfig(40)
    k = 30
    ratios = []
    for g in (0.9, 0.99, 0.999):
        p = params_from_g(g, 1.0, 1000.0, 0.2)
        dec = closure_decomposition(p, c)
        t = 2 * math.pi / math.sqrt(dec.Delta)
        nterm = abs(math.sin(2 * math.pi) - 2 * math.pi) / dec.Delta ** 1.5 * np.linalg.norm(dec.N[:k, :k])
        ratios.append(nterm / (t * np.linalg.norm(dec.H1[:k, :k])))
    assert ratios[0] < ratios[1] < ratios[2] and ratios[2] > 50 * ratios[0]


def test_qfi_value_examples():
    c = HilbertConfig(20)
    o = build_operators(c)
    v = make_state("vacuum", c)
    assert qfi_value(o.identity, v) == 0
    assert qfi_value(o.P, v) == pytest.approx(2.0, abs=1e-12)
    assert qfi_value(o.n, make_state(("fock", 3), c)) == 0
    with pytest.raises(DimMismatch):
        qfi_value(o.P, v[:5])


@given(st.floats(-1e3, 1e3), st.integers(0, 2**31))
def test_qfi_value_identity_shift(shift, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    h = (A + A.conj().T) / 2
    s = rng.normal(size=12) + 1j * rng.normal(size=12)
    s /= np.linalg.norm(s)
    base = qfi_value(h, s)
    assert qfi_value(h + shift * np.eye(12), s) == pytest.approx(base, rel=1e-9, abs=1e-9 * (1 + abs(shift)) ** 2)


def test_qfi_analytic_forms():
    assert qfi_analytic(P08, 0.0, 1.25) == 0
    assert qfi_analytic(params_from_g(0.8, 1, 1000, 0.0), 5.0, 1.25) == 0
    d = derive_parameters(P08)
    t = np.linspace(0.1, 20, 17)
    var_p2 = 1.25
    var_N = (16 * 0.2 * (d.alpha + 0.4)) ** 2 * var_p2
    lhs = qfi_analytic(P08, t, var_p2, "g")
    rhs = qfi_analytic(P08, t, var_N, "alpha") * dalpha_dg(P08) ** 2
    assert np.allclose(lhs, rhs, rtol=1e-12)
    with pytest.raises(ValueError):
        qfi_analytic(P08, 1.0, 1.0, "beta")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_qfi_tau_n_identity(n):
    p = params_from_g(0.9, 1.0, 1000.0, 0.2)
    t = tau(derive_parameters(p).Delta, n)
    assert qfi_analytic(p, t, 1.25) == pytest.approx(qfi_tau_n(p, n, 1.25), rel=1e-10)


def _numeric_F_at_tau1(p):
    c = HilbertConfig(auto_cutoff(p))
    d = derive_parameters(p)
    return qfi_numeric_g(p, tau(d.Delta), make_state("phi_std", c), c), c


def test_numeric_F_exact_form_at_tau1():
    # at tau_n the generator is h_alpha = 32 n pi (alpha + G) Delta^-3/2 (alpha X^2 + (alpha+2G) P^2)
    # up to identity, so F_g = 4 (dalpha/dg)^2 Var[h_alpha] exactly
    for g in (0.8, 0.9):
        p = params_from_g(g, 1.0, 1000.0, 0.2)
        F, c = _numeric_F_at_tau1(p)
        d = derive_parameters(p)
        o = build_operators(c)
        Q = d.alpha * (o.X @ o.X).real + (d.alpha + 0.4) * (o.P @ o.P).real
        ref = 4 * dalpha_dg(p) ** 2 * (32 * math.pi * (d.alpha + 0.2) / d.Delta ** 1.5) ** 2 \
            * moment(Q, make_state("phi_std", c), "variance")
        assert F == pytest.approx(ref, rel=1e-6)


def test_numeric_F_vs_dominant_term():
    # the dominant-term form drops the alpha X^2 part of N; at G = 0.4 omega
    # the neglected part stays below 15% for g in {0.9, 0.95}
    for g in (0.9, 0.95):
        p = params_from_g(g, 1.0, 1000.0, 0.4)
        F, _ = _numeric_F_at_tau1(p)
        assert abs(F / qfi_tau_n(p, 1, 1.25) - 1) < 0.15


def test_numeric_F_diverges():
    vals = [_numeric_F_at_tau1(params_from_g(g, 1.0, 1000.0, 0.2))[0] for g in (0.90, 0.93, 0.96, 0.99)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_cramer_rao_against_homodyne():
    p = params_from_g(0.85, 1.0, 1000.0, 0.2)
    c = HilbertConfig(auto_cutoff(p))
    s0 = make_state("phi_std", c)
    for t in (1.0, 4.0, tau(derive_parameters(p).Delta)):
        F = qfi_numeric_g(p, t, s0, c)
        I = float(numeric_homodyne(p, c, [t], certify=False, with_omega=False).inverted_variance_g[0])
        assert I <= F * (1 + 1e-9)
