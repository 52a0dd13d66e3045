"""Qubit-coherence encoding: the branch overlap L(t) = <phi|u_up^dag u_down|phi>,
<sigma_x>, its inverted variance, working points with R(g_c) = k + 1/2, and
log-log scaling fits."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .dynamics import Spectrum
from .errors import (CutoffTooSmall, DegenerateDenominator, InsufficientPoints, NoRootInRange,
                     SeriesNotConverged)
from .fock import HilbertConfig, build_operators, make_state, qubit_state, squeeze_operator, truncation_heuristic
from .hamiltonians import auto_cutoff, branch_constant, effective_joint, effective_np
from .model import ModelParams, derive_parameters, params_from_g, spectral_ratio_of_g
from .numerics import central_derivative, certify as run_certified
from .qfi import g_step, qfi_from_states


def _field_state(phi, cfg: HilbertConfig) -> np.ndarray:
    if isinstance(phi, np.ndarray):
        if phi.shape != (cfg.n_max,):
            raise CutoffTooSmall(f"state of length {phi.shape[0]} for n_max={cfg.n_max}")
        return phi
    return make_state(phi, cfg.field_only())


def _default_cfg(p: ModelParams, phi) -> HilbertConfig:
    if isinstance(phi, np.ndarray):
        return HilbertConfig(phi.shape[0])
    return HilbertConfig(auto_cutoff(p, n0=1))


def overlap_direct(p: ModelParams, t, phi, cfg: HilbertConfig, shift_down: float = 0.0, shift_up: float = 0.0):
    """L at one or many times by exact propagation of both branches."""
    f = cfg.field_only()
    psi = _field_state(phi, f)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    c_dn = branch_constant(p, "down") + shift_down
    c_up = branch_constant(p, "up") + shift_up
    up = Spectrum(effective_np(p, "up", f, constant=c_up)).evolve(psi, ts)
    dn = Spectrum(effective_np(p, "down", f, constant=c_dn)).evolve(psi, ts)
    L = np.einsum("ki,ki->k", up.conj(), dn)
    return L if np.ndim(t) else complex(L[0])


@dataclass(frozen=True)
class SqueezedExpansion:
    c_up: np.ndarray
    c_down: np.ndarray
    n_terms: int
    norm_up: float
    norm_down: float


def squeezed_coefficients(p: ModelParams, phi, n_terms: int, dim: int) -> tuple[SqueezedExpansion, np.ndarray, np.ndarray]:
    d = derive_parameters(p)
    c = HilbertConfig(dim)
    psi = _field_state(phi, HilbertConfig(dim)) if not isinstance(phi, np.ndarray) else np.pad(phi, (0, dim - phi.shape[0]))
    S_up = squeeze_operator(d.r_up, c)
    S_dn = squeeze_operator(d.r_down, c)
    cu = (S_up.conj().T @ psi)[:n_terms]
    cd = (S_dn.conj().T @ psi)[:n_terms]
    exp = SqueezedExpansion(cu, cd, n_terms, float(np.vdot(cu, cu).real), float(np.vdot(cd, cd).real))
    return exp, S_up, S_dn


def overlap_squeezed_basis(p: ModelParams, t: float, phi, n_terms: int = 64, tol: float = 1e-8,
                           max_terms: int = 2048) -> complex:
    """L from the expansion of phi in the squeezed eigenbases S[r_sigma]|n>.

    Each branch term picks up exp(-i (n E_sigma + Z_sigma) t) where
    Z_sigma = (E_sigma - w_sigma)/2 + constant is the zero-point energy, so
    the result matches the direct route including its global phase.
    """
    d = derive_parameters(p)
    w_dn, w_up = p.omega - p.shift, p.omega + p.shift
    z_dn = (d.E_down - w_dn) / 2 + branch_constant(p, "down")
    z_up = (d.E_up - w_up) / 2 + branch_constant(p, "up")
    prev = None
    N = n_terms
    while N <= max_terms:
        dim = max(2 * N + 40, truncation_heuristic(max(abs(d.r_up), abs(d.r_down))) + N)
        ex, S_up, S_dn = squeezed_coefficients(p, phi, N, dim)
        n = np.arange(N)
        v_dn = S_dn[:, :N] @ (ex.c_down * np.exp(-1j * n * d.E_down * t))
        v_up = S_up[:, :N] @ (ex.c_up * np.exp(-1j * n * d.E_up * t))
        L = complex(np.vdot(v_up, v_dn) * np.exp(-1j * (z_dn - z_up) * t))
        if prev is not None and abs(abs(L) - abs(prev)) < tol and abs(L - prev) < 10 * tol:
            return L
        prev = L
        N *= 2
    raise SeriesNotConverged(f"squeezed-basis series not converged with {max_terms} terms")


def overlap(p: ModelParams, t, phi="vacuum", method: str = "direct", cfg: HilbertConfig | None = None):
    if method == "direct":
        return overlap_direct(p, t, phi, cfg or _default_cfg(p, phi))
    if method == "squeezed_basis":
        return overlap_squeezed_basis(p, float(t), phi)
    raise ValueError(f"method must be 'direct' or 'squeezed_basis', got {method!r}")


def sigma_x_expectation(p: ModelParams, t, phi="vacuum", qubit_coeffs="q_std", cfg: HilbertConfig | None = None):
    """<sigma_x> = 2 Re[c1* c2 L] for the product state (c1|up> + c2|down>) (x) phi."""
    c1, c2 = qubit_state(qubit_coeffs)
    return 2 * np.real(np.conj(c1) * c2 * overlap(p, t, phi, "direct", cfg))


@dataclass
class QubitSignal:
    t: float
    L: complex
    dL: complex
    sigma_x: float
    inverted_variance: float
    constant_phase: float     # Omega t / 2 mod 2 pi, carried by L through H_down's constant
    n_max: int
    residual: float = float("nan")


def qubit_signal(p: ModelParams, t: float, phi="vacuum", cfg: HilbertConfig | None = None, certify: bool = False,
                 shift_down: float = 0.0, shift_up: float = 0.0, step: float | None = None) -> QubitSignal:
    """L, dL/dg and the inverted variance Re[dL]^2 / (1 - Re[L]^2) at time t,
    for the qubit state with 2 c1* c2 = 1."""
    cfg = cfg or _default_cfg(p, phi)
    g = p.g
    # L carries a phase ~ Omega t / 2 whose roundoff sets the noise floor;
    # a coarser step than the homodyne one keeps the h vs h/2 test clean
    h = g_step(g, 1e-4) if step is None else step

    def compute(c: HilbertConfig):
        def L_of(x):
            return np.array([overlap_direct(p.with_g(x), t, phi, c, shift_down, shift_up)])

        der = central_derivative(L_of, g, h, with_center=True)
        L, dL = complex(der.center[0]), complex(der.value[0])
        den = 1 - L.real ** 2
        if den <= 1e-12:
            raise DegenerateDenominator(f"1 - Re[L]^2 = {den:.3g}: <sigma_x> carries no first-order information")
        sig = QubitSignal(t, L, dL, L.real, dL.real ** 2 / den, (p.Omega * t / 2) % (2 * math.pi), c.n_max)
        return sig, [np.array([L.real, L.imag]), np.array([sig.inverted_variance])]

    if isinstance(phi, np.ndarray):
        certify = False
    sig, res = run_certified(compute, cfg.field_only(), enabled=certify)
    sig.residual = res
    return sig


def inverted_variance_qubit(p: ModelParams, t: float, phi="vacuum", cfg: HilbertConfig | None = None) -> float:
    return qubit_signal(p, t, phi, cfg).inverted_variance


def qfi_qubit_numeric(p: ModelParams, t: float, phi="vacuum", qubit="q_std", cfg: HilbertConfig | None = None) -> float:
    """QFI in g of the product state evolved under the block-diagonal effective model."""
    cfg = (cfg or _default_cfg(p, phi)).with_qubit()
    psi0 = np.kron(qubit_state(qubit), _field_state(phi, cfg.field_only()))

    def states(x):
        return Spectrum(effective_joint(p.with_g(x), cfg)).evolve(psi0, [t])

    der = central_derivative(states, p.g, g_step(p.g), with_center=True)
    return float(qfi_from_states(der.center, der.value)[0])


def closed_form_numerator(p: ModelParams, t: float, phi="vacuum", cfg: HilbertConfig | None = None) -> float:
    """4096 pi^2 g^2 G^2 (w-2G)^2 (alpha+2G)^2 Delta^-3 Im[<phi|u_up^dag u_down P^2|phi>]^2."""
    cfg = cfg or _default_cfg(p, phi)
    d = derive_parameters(p)
    f = cfg.field_only()
    psi = _field_state(phi, f)
    o = build_operators(f)
    up = Spectrum(effective_np(p, "up", f)).unitary(t)
    dn = Spectrum(effective_np(p, "down", f)).unitary(t)
    q = np.vdot(up @ psi, dn @ (o.P @ o.P @ psi))
    return (4096 * math.pi ** 2 * d.g ** 2 * p.G ** 2 * (p.omega - 2 * p.G) ** 2
            * (d.alpha + 2 * p.G) ** 2 / d.Delta ** 3 * q.imag ** 2)


@dataclass
class WorkingPoint:
    g_c: float
    k: int
    R_value: float
    Delta_c: float
    tau: float
    inverted_variance: float = float("nan")
    sigma_x: float = float("nan")
    abs_L: float = float("nan")
    n_max: int = 0
    residual: float = float("nan")


def _bisect(f, lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo if abs(f(lo)) <= abs(f(hi)) else hi


def find_working_points(omega: float, Omega: float, G: float, g_range=(0.7, 0.99), grid: int = 200,
                        with_inverted_variance: bool = False, phi="vacuum", n_max: int | None = None,
                        certify: bool = False) -> list[WorkingPoint]:
    """All g_c in g_range with R(g_c) = k + 1/2, sorted by g_c.

    Evaluation time at each point is tau = 4 pi / sqrt(Delta(g_c)).
    """
    lo, hi = g_range
    if not 0 < lo < hi < 1:
        raise NoRootInRange(f"g_range must lie inside (0, 1), got {g_range}")
    gs = np.linspace(lo, hi, grid)
    Rs = np.array([spectral_ratio_of_g(x, omega, G) for x in gs])
    if not np.all(np.diff(Rs) > 0):
        raise NoRootInRange("R(g) is not monotone on the requested range")
    points = []
    for i in range(grid - 1):
        for k in range(int(math.floor(Rs[i] - 0.5)), int(math.floor(Rs[i + 1] - 0.5)) + 1):
            target = k + 0.5
            if not Rs[i] < target <= Rs[i + 1]:
                continue
            gc = _bisect(lambda x: spectral_ratio_of_g(x, omega, G) - target, gs[i], gs[i + 1])
            p = params_from_g(gc, omega, Omega, G)
            d = derive_parameters(p)
            points.append(WorkingPoint(gc, k, d.R, d.Delta, 4 * math.pi / math.sqrt(d.Delta)))
    if not points:
        raise NoRootInRange(f"no half-integer level of R in g_range {g_range}")
    if with_inverted_variance:
        for wp in points:
            p = params_from_g(wp.g_c, omega, Omega, G)
            cfg = HilbertConfig(n_max) if n_max else HilbertConfig(auto_cutoff(p, n0=0))
            s = qubit_signal(p, wp.tau, phi, cfg, certify=certify)
            wp.inverted_variance, wp.sigma_x, wp.abs_L = s.inverted_variance, s.sigma_x, abs(s.L)
            wp.n_max, wp.residual = s.n_max, s.residual
    return points


def scaling_exponent(points) -> tuple[float, float]:
    """OLS slope (and its standard error) of log(value) against log(Delta)."""
    pts = [(float(D), float(v)) for D, v in points]
    if len(pts) < 3:
        raise InsufficientPoints(f"need at least 3 points, got {len(pts)}")
    if any(D <= 0 or v <= 0 for D, v in pts):
        raise InsufficientPoints("log-log fit requires positive Delta and values")
    x, y = np.log([D for D, _ in pts]), np.log([v for _, v in pts])
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.stderr)
