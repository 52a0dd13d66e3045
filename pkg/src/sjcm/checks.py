"""Invariant suite run by `sjcm check`: fast, self-contained consistency
checks across the modules. Each check returns (passed, detail)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corrections import is_valid
from .dynamics import Spectrum, expectations
from .fock import HilbertConfig, build_operators, make_state, moment
from .hamiltonians import auto_cutoff, conjugation_residual, diagonalized_np, effective_np, full_sjcm
from .homodyne import analytic_signals, inverted_variance_peaks, numeric_homodyne
from .model import derive_parameters, params_from_g, spectral_ratio_of_g, tau
from .qfi import closure_decomposition, qfi_numeric_series
from .qubit_encoding import find_working_points, qubit_signal, squeezed_coefficients

REFERENCE = dict(g=0.8, omega=1.0, Omega=1000.0, G=0.2)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _ref():
    r = REFERENCE
    return params_from_g(r["g"], r["omega"], r["Omega"], r["G"])


def check_spectral_identity(rng):
    worst = 0.0
    for _ in range(1000):
        w = rng.uniform(0.5, 2.0)
        p = params_from_g(rng.uniform(0.01, 0.99), w, rng.uniform(10, 1e4), rng.uniform(0, 0.49) * w)
        d = derive_parameters(p)
        worst = max(worst, abs(d.E_down - math.sqrt(d.Delta) / 2) / d.E_down)
    return worst < 1e-12, f"max rel |E_down - sqrt(Delta)/2| = {worst:.2e}"


def check_monotone(rng):
    gs = np.linspace(0.01, 0.99, 200)
    D = [derive_parameters(params_from_g(x, 1, 1000, 0.2)).Delta for x in gs]
    R = [spectral_ratio_of_g(x, 1, 0.2) for x in gs]
    ok = bool(np.all(np.diff(D) < 0) and np.all(np.diff(R) > 0))
    return ok, f"Delta decreasing, R increasing on 200-point grid: {ok}"


def check_hermitian_builders(rng):
    p = _ref()
    c = HilbertConfig(40)
    mats = [effective_np(p, "down", c), effective_np(p, "up", c), diagonalized_np(p, c),
            full_sjcm(p, c.with_qubit())]
    err = max(float(np.max(np.abs(H - H.conj().T))) for H in mats)
    return err < 1e-12, f"max |H - H^dag| = {err:.2e}"


def check_quadrature_equivalence(rng):
    p = _ref()
    t = np.linspace(0, tau(derive_parameters(p).Delta), 257)
    num = numeric_homodyne(p, None, t, certify=False, with_qfi=False, with_omega=False)
    ana = analytic_signals(p, t)
    e = max(np.max(np.abs(num.x_mean - ana.x_mean)), np.max(np.abs(num.x_var - ana.x_var)))
    return e < 1e-6, f"max |numeric - closed form| over one period = {e:.2e} (n_max={num.n_max})"


def check_closure(rng):
    c = HilbertConfig(120)
    dec = closure_decomposition(_ref(), c)
    k = 60
    U = dec.Upsilon
    lhs = dec.H @ U - U @ dec.H
    res = np.linalg.norm((lhs - math.sqrt(dec.Delta) * U)[:k, :k]) / np.linalg.norm(U[:k, :k])
    return res < 1e-6, f"interior ||[H, U] - sqrt(Delta) U|| / ||U|| = {res:.2e}"


def check_heisenberg(rng):
    p = _ref()
    d = derive_parameters(p)
    n = 240
    c = HilbertConfig(n)
    o = build_operators(c)
    k = n // 8          # one period squeezes by 2|r_down|; wider support leaks past the cutoff
    v = np.zeros(n, complex)
    v[:k] = rng.normal(size=k) + 1j * rng.normal(size=k)
    v /= np.linalg.norm(v)
    t = np.linspace(0, tau(d.Delta), 33)
    xs = expectations(Spectrum(effective_np(p, "down", c)).evolve(v, t), o.X).real
    s = math.sqrt(d.Delta)
    xh = (np.cos(s * t / 2) * moment(o.X, v) + 4 * (d.alpha + 2 * p.G) / s * np.sin(s * t / 2) * moment(o.P, v))
    e = float(np.max(np.abs(xs - xh)))
    return e < 1e-8, f"max |<X>_Schroedinger - <X>_Heisenberg| = {e:.2e}"


def check_time_reversal(rng):
    p = _ref()
    c = HilbertConfig(auto_cutoff(p))
    sp = Spectrum(effective_np(p, "down", c))
    s0 = make_state("phi_std", c)
    t = tau(derive_parameters(p).Delta)
    back = sp.unitary(-t) @ (sp.unitary(t) @ s0)
    e = float(np.max(np.abs(back - s0)))
    return e < 1e-10, f"max |U(-t) U(t) s0 - s0| = {e:.2e}"


def check_peak_formula(rng):
    p = _ref()
    D = derive_parameters(p).Delta
    a = float(analytic_signals(p, tau(D)).inverted_variance_g)
    e = inverted_variance_peaks(p, 1)
    r = abs(a - e) / e
    return r < 1e-10, f"I_g(tau_1) = {e:.10g}, rel dev closed forms {r:.1e}"


def check_omega_identity(rng):
    p = _ref()
    d = derive_parameters(p)
    t = np.linspace(0.1, 3 * tau(d.Delta), 50)
    s = analytic_signals(p, t)
    lhs = s.chi_omega
    rhs = -s.chi_g / (2 * d.g * (p.omega - 2 * p.G))
    e = float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
    ratio = inverted_variance_peaks(p, 2, "g") / inverted_variance_peaks(p, 2, "omega")
    e2 = abs(ratio / (4 * d.g ** 2 * (p.omega - 2 * p.G) ** 2) - 1)
    return max(e, e2) < 1e-10, f"chi identity {e:.1e}, peak ratio identity {e2:.1e}"


def check_cramer_rao(rng):
    p = params_from_g(0.9, 1, 1000, 0.4)
    D = derive_parameters(p).Delta
    t = np.linspace(0.05, 1.5 * tau(D), 64)
    sig = numeric_homodyne(p, None, t, certify=False, with_omega=False)
    worst = float(np.max(sig.inverted_variance_g / sig.qfi_g))
    return worst <= 1 + 1e-9, f"max I_g / F_g = {worst:.4f}"


def check_parity(rng):
    p = _ref()
    ex, _, _ = squeezed_coefficients(p, "vacuum", 64, 200)
    odd = max(np.max(np.abs(ex.c_up[1::2])), np.max(np.abs(ex.c_down[1::2])))
    comp = max(abs(ex.norm_up - 1), abs(ex.norm_down - 1))
    return odd < 1e-12 and comp < 1e-8, f"odd coefficients {odd:.1e}, completeness {comp:.1e}"


def check_phase_immunity(rng):
    wp = find_working_points(1.0, 1000.0, 0.2, (0.7, 0.8))[0]
    p = params_from_g(wp.g_c, 1.0, 1000.0, 0.2)
    base = qubit_signal(p, wp.tau).inverted_variance
    worst = 0.0
    for c in rng.uniform(-5, 5, size=3):
        s = qubit_signal(p, wp.tau, shift_down=c)
        worst = max(worst, abs(s.inverted_variance - base) / base, abs(s.L) - 1)
    return worst < 1e-4, f"max rel change of I under constant shifts = {worst:.1e} (|L| <= 1)"


def check_sw_scaling(rng):
    r = [conjugation_residual(params_from_g(0.8, 1, W, 0.2), HilbertConfig(40), 2)["offdiag"]
         for W in (1e3, 2e3, 4e3)]
    ok = r[0] > r[1] > r[2]
    return ok, "spin-off-diagonal residual " + " > ".join(f"{x:.2e}" for x in r)


def check_validity_flag(rng):
    bad = 0
    for _ in range(500):
        D, beta = 10 ** rng.uniform(-3, 0), 10 ** rng.uniform(1, 8)
        if D < beta ** (-1 / 3) and is_valid(D, beta):
            bad += 1
    return bad == 0, f"{bad} scenarios with Delta < beta^-1/3 flagged valid"


def check_qfi_nonnegative(rng):
    p = _ref()
    c = HilbertConfig(auto_cutoff(p))
    F = qfi_numeric_series(p, np.linspace(0, 5, 20), make_state("phi_std", c), c)
    return bool(np.all(F >= 0) and F[0] < 1e-12), f"F_g >= 0 on grid, F_g(0) = {F[0]:.1e}"


CHECKS = [
    ("spectral_identity", check_spectral_identity),
    ("monotone_delta_R", check_monotone),
    ("hermitian_builders", check_hermitian_builders),
    ("quadrature_closed_form", check_quadrature_equivalence),
    ("closure_relation", check_closure),
    ("heisenberg_picture", check_heisenberg),
    ("time_reversal", check_time_reversal),
    ("peak_formula", check_peak_formula),
    ("omega_identities", check_omega_identity),
    ("cramer_rao", check_cramer_rao),
    ("qfi_nonnegative", check_qfi_nonnegative),
    ("squeezed_parity", check_parity),
    ("phase_immunity", check_phase_immunity),
    ("sw_scaling", check_sw_scaling),
    ("validity_flag", check_validity_flag),
]


def run_checks(seed: int = 0, only=None) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        rng = np.random.default_rng(seed)
        try:
            ok, detail = fn(rng)
        except Exception as e:  # a crashing check is a failing check
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append(CheckResult(name, bool(ok), detail))
    return out
