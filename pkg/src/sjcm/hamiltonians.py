"""Hamiltonian builders: full model, effective normal-phase branches, the
squeezed diagonalized form and the corrected transform with its generator.

Constant convention: the down branch carries -Omega/2, the up branch carries
none (`branch_constant`). Overlap phases depend on this choice.
"""
from __future__ import annotations

import enum

import numpy as np
from scipy.linalg import expm

from .errors import CutoffTooSmall, UnboundedSpectrum
from .fock import HilbertConfig, build_operators, interior_index, squeeze_operator, tail_cutoff
from .model import ModelParams, derive_parameters


class HamiltonianKind(enum.Enum):
    FullSJCM = "full_sjcm"
    EffectiveDown = "effective_down"
    EffectiveUp = "effective_up"
    DiagonalizedNP = "diagonalized_np"
    TransformedSr = "transformed_sr"


def branch_constant(p: ModelParams, branch: str) -> float:
    return -p.Omega / 2 if branch == "down" else 0.0


def full_sjcm(p: ModelParams, cfg: HilbertConfig) -> np.ndarray:
    """omega a^dag a + (Omega/2) sz + lam (a^dag s- + a s+) - G (a^2 + a^dag^2)."""
    if not cfg.include_qubit:
        raise CutoffTooSmall("full model needs a qubit-including Hilbert config")
    o = build_operators(cfg)
    return (p.omega * o.n + p.Omega / 2 * o.sz
            + p.lam * (o.ad @ o.sm + o.a @ o.sp)
            - p.G * (o.a @ o.a + o.ad @ o.ad))


def _check_bounded(w: float, G: float, branch: str):
    if not abs(w) > 2 * G:
        raise UnboundedSpectrum(f"{branch} branch: |omega -/+ lam^2/Omega| = {abs(w):.6g} <= 2G = {2 * G:.6g}")


def effective_np(p: ModelParams, branch: str, cfg: HilbertConfig, constant: float | None = None) -> np.ndarray:
    """Field-only effective Hamiltonian of one qubit branch.

    down: (omega - lam^2/Omega) n - G(a^dag^2 + a^2) - Omega/2
    up:   (omega + lam^2/Omega) n - G(a^dag^2 + a^2)
    `constant` overrides the diagonal shift (default per `branch_constant`).
    """
    if branch not in ("up", "down"):
        raise ValueError(f"branch must be 'up' or 'down', got {branch!r}")
    if branch == "down":
        derive_parameters(p)
    w = p.omega - p.shift if branch == "down" else p.omega + p.shift
    _check_bounded(w, p.G, branch)
    o = build_operators(cfg.field_only())
    c = branch_constant(p, branch) if constant is None else constant
    return w * o.n - p.G * (o.a @ o.a + o.ad @ o.ad) + c * o.identity


def effective_joint(p: ModelParams, cfg: HilbertConfig) -> np.ndarray:
    """|up><up| (x) H_up + |down><down| (x) H_down on the qubit (x) field space."""
    f = cfg.field_only()
    z = np.zeros((cfg.n_max, cfg.n_max))
    return np.block([[effective_np(p, "up", f), z], [z, effective_np(p, "down", f)]])


def diagonalized_np(p: ModelParams, cfg: HilbertConfig) -> np.ndarray:
    """S[r_down]^dag H_down S[r_down]; diagonal up to truncation effects."""
    d = derive_parameters(p)
    H = effective_np(p, "down", cfg)
    S = squeeze_operator(d.r_down, cfg.field_only())
    Hp = S.conj().T @ H @ S
    return (Hp + Hp.conj().T) / 2


def transformed_sjcm(p: ModelParams, cfg: HilbertConfig, order: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Corrected transformed Hamiltonian H_Sr and generator S_r.

    order=1 keeps the leading (beta^0) terms, H_Sr block-diagonal with the
    down block equal to H_down, and S_r = S = lam (a^dag s- - a s+)/Omega.
    order=2 adds the printed beta^-1 terms of H_Sr and beta^-3/2 terms of S_r.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not cfg.include_qubit:
        raise CutoffTooSmall("transformed model needs a qubit-including Hilbert config")
    o = build_operators(cfg)
    w, W, lam, G = p.omega, p.Omega, p.lam, p.G
    a2 = o.a @ o.a + o.ad @ o.ad
    S = lam / W * (o.ad @ o.sm - o.a @ o.sp)
    H = (w * o.n + W / 2 * o.sz - G * a2
         + lam ** 2 / W * o.n @ o.sz + lam ** 2 / W * o.up)
    if order == 2:
        S = S + (lam * w / W ** 2 * (o.ad @ o.sm - o.a @ o.sp)
                 + 2 * G * lam / W ** 2 * (o.ad @ o.sp - o.a @ o.sm)
                 + 4 * lam ** 3 / (3 * W ** 3) * (o.a @ o.ad @ o.a @ o.sp - o.ad @ o.a @ o.ad @ o.sm))
        H = H + (lam ** 2 * w / W ** 2 * o.n @ o.sz
                 - lam ** 2 * G / W ** 2 * a2 @ o.sz
                 - lam ** 4 / W ** 3 * o.n @ o.n @ o.sz
                 + lam ** 2 / W * (w / W - lam ** 2 / W ** 2) * o.up
                 - 2 * lam ** 4 / W ** 3 * o.n @ o.up)
    return H, S


def spin_block(A: np.ndarray, cfg: HilbertConfig, spin: str) -> np.ndarray:
    n = cfg.n_max
    s = slice(0, n) if spin == "up" else slice(n, 2 * n)
    return A[s, s]


def offdiagonal_spin_part(A: np.ndarray, cfg: HilbertConfig) -> np.ndarray:
    n = cfg.n_max
    B = np.zeros_like(A)
    B[:n, n:] = A[:n, n:]
    B[n:, :n] = A[n:, :n]
    return B


def build(kind: HamiltonianKind, p: ModelParams, cfg: HilbertConfig) -> np.ndarray:
    if kind is HamiltonianKind.FullSJCM:
        return full_sjcm(p, cfg.with_qubit())
    if kind is HamiltonianKind.EffectiveDown:
        return effective_np(p, "down", cfg)
    if kind is HamiltonianKind.EffectiveUp:
        return effective_np(p, "up", cfg)
    if kind is HamiltonianKind.DiagonalizedNP:
        return diagonalized_np(p, cfg)
    if kind is HamiltonianKind.TransformedSr:
        return transformed_sjcm(p, cfg.with_qubit())[0]
    raise ValueError(kind)


def auto_cutoff(p: ModelParams, n0: int = 1, tol: float = 1e-12) -> int:
    """Fock cutoff for dynamics under H_down starting from <= n0 quanta.

    H_down = a X^2 + b P^2 squeezes an initial low-lying state by up to
    r = ln(b/a)/2 = 2|r_down| over a period; the cutoff keeps the tail weight
    of such a state below `tol`.
    """
    d = derive_parameters(p)
    return tail_cutoff(2 * abs(d.r_down), n0=n0, tol=tol)


def conjugation_residual(p: ModelParams, cfg: HilbertConfig, order: int = 2, fraction: float = 0.5) -> dict:
    """Frobenius norms of exp(-S_r) H exp(S_r) - H_Sr on the interior block
    (lowest (1 - fraction) n_max levels of each spin sector): total, and the
    spin-off-diagonal part of the conjugated full model itself."""
    c = cfg.with_qubit()
    H = full_sjcm(p, c)
    Hs, S = transformed_sjcm(p, c, order)
    C = expm(-S) @ H @ expm(S)
    idx = interior_index(c, fraction)
    D = (C - Hs)[np.ix_(idx, idx)]
    off = offdiagonal_spin_part(C, c)[np.ix_(idx, idx)]
    return {"total": float(np.linalg.norm(D)), "offdiag": float(np.linalg.norm(off))}
