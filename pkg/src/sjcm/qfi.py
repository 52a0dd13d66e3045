"""Quantum Fisher information for the normal-phase family.

The down-branch effective Hamiltonian is written as H_alpha = H0 + alpha H1
with H1 = X^2 + P^2 - 1 and H0 = 2G P^2 - G - Omega/2, so that H_alpha equals
`effective_np(p, "down")` up to truncation at the top Fock level. The
generator convention is h = i U^dag (d U / d param).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Spectrum
from .errors import ConvergenceError, DimMismatch, StepUnderflow
from .fock import HilbertConfig, build_operators, interior, moment
from .hamiltonians import effective_np
from .model import ModelParams, derive_parameters
from .numerics import central_derivative


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


@dataclass(frozen=True)
class ClosureDecomposition:
    H0: np.ndarray
    H1: np.ndarray
    M: np.ndarray
    N: np.ndarray
    Upsilon: np.ndarray
    alpha: float
    Delta: float

    @property
    def H(self) -> np.ndarray:
        return self.H0 + self.alpha * self.H1


def quadrature_family(p: ModelParams, cfg: HilbertConfig) -> tuple[np.ndarray, np.ndarray]:
    o = build_operators(cfg.field_only())
    X2 = (o.X @ o.X).real
    P2 = (o.P @ o.P).real
    H1 = X2 + P2 - o.identity
    H0 = 2 * p.G * P2 - (p.G + p.Omega / 2) * o.identity
    return H0, H1


def closure_decomposition(p: ModelParams, cfg: HilbertConfig) -> ClosureDecomposition:
    d = derive_parameters(p)
    H0, H1 = quadrature_family(p, cfg)
    H = H0 + d.alpha * H1
    C = commutator(H0, H1)
    M = -1j * C
    N = -commutator(H, C)
    Upsilon = 1j * math.sqrt(d.Delta) * M - N
    return ClosureDecomposition(H0, H1, M, N, Upsilon, d.alpha, d.Delta)


def analytic_generator(dec: ClosureDecomposition, t: float) -> np.ndarray:
    """h_alpha = H1 t + (cos(s t) - 1)/Delta M - (sin(s t) - s t)/Delta^(3/2) N, s = sqrt(Delta)."""
    D = dec.Delta
    s = math.sqrt(D)
    return (dec.H1 * t + (math.cos(s * t) - 1) / D * dec.M
            - (math.sin(s * t) - s * t) / D ** 1.5 * dec.N)


def generator(p: ModelParams, t: float, method: str, cfg: HilbertConfig, step: float | None = None) -> np.ndarray:
    """Generator of alpha-translations of U_alpha = exp(-i H_alpha t)."""
    dec = closure_decomposition(p, cfg)
    if method == "analytic":
        return analytic_generator(dec, t)
    if method != "numeric":
        raise ValueError(f"method must be 'analytic' or 'numeric', got {method!r}")
    if t == 0:
        return np.zeros_like(dec.H0, dtype=complex)
    alpha = dec.alpha
    h = 1e-6 * max(1.0, abs(alpha)) if step is None else step
    if h < 1e-12 * abs(alpha):
        raise StepUnderflow(f"step {h:.3g} below 1e-12 |alpha|")

    def U(a):
        return Spectrum(dec.H0 + a * dec.H1).unitary(t)

    k = interior(cfg.n_max, 0.5)     # the top levels vary steeply in alpha through the cutoff
    try:
        der = central_derivative(U, alpha, h, with_center=True, measure=lambda A: A[:k, :k])
    except ConvergenceError:
        # steep alpha dependence at long times: one retry with a tenfold smaller step
        der = central_derivative(U, alpha, h / 10, with_center=True, measure=lambda A: A[:k, :k])
    hmat = 1j * der.center.conj().T @ der.value
    return (hmat + hmat.conj().T) / 2


def qfi_value(h: np.ndarray, s0: np.ndarray) -> float:
    if h.shape != (s0.shape[0], s0.shape[0]):
        raise DimMismatch(f"generator {h.shape} vs state {s0.shape}")
    return max(0.0, 4 * moment(h, s0, "variance"))


def _sin_term(Delta: float, t):
    s = math.sqrt(Delta)
    return (np.sin(s * np.asarray(t)) - s * np.asarray(t)) ** 2 / Delta ** 3


def qfi_analytic(p: ModelParams, t, var_target: float, form: str = "g"):
    """Dominant-term QFI.

    form="alpha": 4 [sin(s t) - s t]^2 / Delta^3 Var[N]        (var_target = Var[N])
    form="g":     1024 (w-2G)^2 G^2 g^2 (alpha+2G)^2 [...]^2 / Delta^3 Var[P^2]
                                                               (var_target = Var[P^2])
    """
    d = derive_parameters(p)
    if form == "alpha":
        return 4 * _sin_term(d.Delta, t) * var_target
    if form == "g":
        e = p.omega - 2 * p.G
        pref = 1024 * e ** 2 * p.G ** 2 * d.g ** 2 * (d.alpha + 2 * p.G) ** 2
        return pref * _sin_term(d.Delta, t) * var_target
    raise ValueError(f"form must be 'alpha' or 'g', got {form!r}")


def qfi_tau_n(p: ModelParams, n: int, var_p2: float) -> float:
    """8 n^2 pi^2 G^2 g^2 / ((w-2G)(alpha+2G)(1-g^2)^3) Var[P^2]: the dominant-term QFI at tau_n."""
    d = derive_parameters(p)
    e = p.omega - 2 * p.G
    return (8 * n ** 2 * math.pi ** 2 * p.G ** 2 * d.g ** 2
            / (e * (d.alpha + 2 * p.G) * (1 - d.g ** 2) ** 3) * var_p2)


def g_step(g: float, scale: float = 1e-5) -> float:
    return scale * (1 - g)


def qfi_numeric_g(p: ModelParams, t: float, s0: np.ndarray, cfg: HilbertConfig, step: float | None = None) -> float:
    """4 Var[h_g] with h_g = i U^dag dU/dg for the down-branch effective model,
    from the derivative of the evolved state U(t) s0 (the top rows of U vary
    steeply in g through the cutoff and would spoil the step test)."""
    return float(qfi_numeric_series(p, [t], s0, cfg, step)[0])


def qfi_from_states(psi: np.ndarray, dpsi: np.ndarray) -> np.ndarray:
    """Pure-state QFI 4(<dpsi|dpsi> - |<psi|dpsi>|^2), row-wise."""
    nn = np.einsum("ki,ki->k", dpsi.conj(), dpsi).real
    ov = np.einsum("ki,ki->k", psi.conj(), dpsi)
    return np.maximum(4 * (nn - np.abs(ov) ** 2), 0.0)


def qfi_numeric_series(p: ModelParams, times, s0: np.ndarray, cfg: HilbertConfig, step: float | None = None) -> np.ndarray:
    """qfi_numeric_g over a time grid from one set of eigendecompositions."""
    g = p.g
    h = g_step(g) if step is None else step
    fcfg = cfg.field_only()

    def states(x):
        # global phase of the -Omega/2 constant dropped (g independent)
        return Spectrum(effective_np(p.with_g(x), "down", fcfg, constant=0.0)).evolve(s0, times)

    try:
        der = central_derivative(states, g, h, with_center=True)
    except ConvergenceError:
        der = central_derivative(states, g, h / 10, with_center=True)
    return qfi_from_states(der.center, der.value)


def dalpha_dg(p: ModelParams) -> float:
    return -p.g * (p.omega - 2 * p.G)


def analytic_N_coefficients(alpha: float, G: float) -> tuple[float, float]:
    """N = cX X^2 + cP P^2 (+ const) for the quadratic family: (-16 G alpha, 16 G (alpha + 2G))."""
    return -16 * G * alpha, 16 * G * (alpha + 2 * G)

