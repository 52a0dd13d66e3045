"""Truncated Fock-space operator algebra.

Operators and states are plain numpy arrays. When a qubit is included the
qubit index is the slow (outer) one, basis order |up>, |down>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from .errors import BadDescriptor, CutoffTooSmall, DimMismatch

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HilbertConfig:
    n_max: int
    include_qubit: bool = False

    def __post_init__(self):
        if self.n_max < 2:
            raise CutoffTooSmall(f"n_max must be >= 2, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * self.n_max if self.include_qubit else self.n_max

    def field_only(self) -> "HilbertConfig":
        return HilbertConfig(self.n_max, False)

    def with_qubit(self) -> "HilbertConfig":
        return HilbertConfig(self.n_max, True)

    def doubled(self) -> "HilbertConfig":
        return HilbertConfig(2 * self.n_max, self.include_qubit)


def interior(n_max: int, fraction: float = 0.1) -> int:
    """Number of retained low Fock levels when the top `fraction` is excluded."""
    return max(1, int(math.floor(n_max * (1 - fraction))))


def interior_index(cfg: HilbertConfig, fraction: float = 0.1) -> np.ndarray:
    k = interior(cfg.n_max, fraction)
    idx = np.arange(k)
    if cfg.include_qubit:
        idx = np.concatenate([idx, cfg.n_max + idx])
    return idx


def interior_block(A: np.ndarray, cfg: HilbertConfig, fraction: float = 0.1) -> np.ndarray:
    idx = interior_index(cfg, fraction)
    return A[np.ix_(idx, idx)]


def destroy(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


# Pauli matrices in the (up, down) basis; sigma_+ = |up><down|.
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])
SIGMA_MINUS = SIGMA_PLUS.T.copy()
PROJ_UP = np.array([[1.0, 0.0], [0.0, 0.0]])
PROJ_DOWN = np.array([[0.0, 0.0], [0.0, 1.0]])


def build_operators(cfg: HilbertConfig) -> SimpleNamespace:
    """Ladder, number and quadrature operators (plus Pauli operators when the
    config includes the qubit). Field operators act on the full space, i.e.
    they are tensored with the qubit identity when `include_qubit` is set;
    the bare field versions are always available with a `_f` suffix.

    Real-valued operators are returned as float arrays so downstream
    eigendecompositions can use the real symmetric solver.
    """
    n = cfg.n_max
    a = destroy(n)
    ad = a.T.copy()
    num = np.diag(np.arange(n, dtype=float))
    X = (a + ad) / SQRT2
    P = 1j * (ad - a) / SQRT2
    field = dict(a=a, ad=ad, n=num, X=X, P=P, identity=np.eye(n))
    ops = SimpleNamespace(cfg=cfg, **{k + "_f": v for k, v in field.items()})
    if not cfg.include_qubit:
        for k, v in field.items():
            setattr(ops, k, v)
        return ops
    eye2 = np.eye(2)
    for k, v in field.items():
        setattr(ops, k, np.kron(eye2, v))
    i_n = np.eye(n)
    for name, s in [("sx", SIGMA_X), ("sy", SIGMA_Y), ("sz", SIGMA_Z), ("sp", SIGMA_PLUS),
                    ("sm", SIGMA_MINUS), ("up", PROJ_UP), ("down", PROJ_DOWN)]:
        setattr(ops, name, np.kron(s, i_n))
    return ops


def truncation_heuristic(r: float) -> int:
    return max(20, math.ceil(12 * (math.sinh(r) ** 2 + 1)))


def tail_cutoff(r: float, n0: int = 0, tol: float = 1e-12, n_min: int = 20) -> int:
    """Cutoff at which a state squeezed by `r` on top of at most `n0` quanta has
    photon-number tail weight below `tol` (weights fall off like tanh(|r|)^n).
    """
    t = math.tanh(abs(r))
    tail = 0 if t < 1e-300 else math.ceil(math.log(tol) / math.log(t))
    n = max(n_min, truncation_heuristic(r), n0 + tail + 20)
    return int(8 * math.ceil(n / 8))


def expm_antihermitian(A: np.ndarray) -> np.ndarray:
    """exp(A) for anti-Hermitian A through the Hermitian eigenproblem of iA."""
    K = 1j * A
    K = (K + K.conj().T) / 2
    w, v = np.linalg.eigh(K)
    return (v * np.exp(-1j * w)) @ v.conj().T


def squeeze_operator(r: float, cfg: HilbertConfig) -> np.ndarray:
    """S[r] = exp[-(r/2)(a^dag^2 - a^2)] on the field space."""
    need = truncation_heuristic(r)
    if cfg.n_max < need:
        raise CutoffTooSmall(f"squeeze r={r:.4g} needs n_max >= {need}, got {cfg.n_max}")
    if r == 0:
        return np.eye(cfg.n_max, dtype=complex)
    a = destroy(cfg.n_max)
    ad = a.T
    return expm_antihermitian(-(r / 2) * (ad @ ad - a @ a))


def fock(n: int, cfg: HilbertConfig) -> np.ndarray:
    if not 0 <= n < cfg.n_max:
        raise CutoffTooSmall(f"Fock level {n} not representable with n_max={cfg.n_max}")
    v = np.zeros(cfg.n_max, dtype=complex)
    v[n] = 1.0
    return v


def _normalized(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0:
        raise BadDescriptor("state descriptor yields the zero vector")
    return v / norm


def make_state(spec, cfg: HilbertConfig) -> np.ndarray:
    """Build a normalized state vector.

    Accepted descriptors:
      "phi_std"                 (|0> + i|1>)/sqrt(2)
      "vacuum" or ("fock", n)
      ("superposition", {n: amplitude, ...})
      ("squeezed", r)           S[r]|0>
      ("product", qubit, field) qubit is "q_std", "up", "down" or (c_up, c_down);
                                field is any field descriptor. Requires
                                cfg.include_qubit.
    Field descriptors given with a qubit config are placed in |down>.
    """
    if isinstance(spec, str):
        spec = {"phi_std": ("superposition", {0: 1.0, 1: 1j}), "vacuum": ("fock", 0)}.get(spec, (spec,))
    kind = spec[0]
    if kind == "product":
        if not cfg.include_qubit:
            raise BadDescriptor("product state requested on a field-only space")
        _, qubit, field = spec
        return np.kron(qubit_state(qubit), make_state(field, cfg.field_only()))
    if cfg.include_qubit:
        return make_state(("product", "down", spec), cfg)
    if kind == "fock":
        return fock(int(spec[1]), cfg)
    if kind == "superposition":
        v = np.zeros(cfg.n_max, dtype=complex)
        for n, c in dict(spec[1]).items():
            if not 0 <= int(n) < cfg.n_max:
                raise CutoffTooSmall(f"Fock level {n} not representable with n_max={cfg.n_max}")
            v[int(n)] += c
        return _normalized(v)
    if kind == "squeezed":
        return squeeze_operator(float(spec[1]), cfg)[:, 0].copy()
    raise BadDescriptor(f"unknown state descriptor {spec!r}")


def qubit_state(q) -> np.ndarray:
    if isinstance(q, str):
        table = {"up": (1.0, 0.0), "down": (0.0, 1.0), "q_std": (1.0, 1.0)}
        if q not in table:
            raise BadDescriptor(f"unknown qubit descriptor {q!r}")
        q = table[q]
    return _normalized(np.asarray(q, dtype=complex))


def moment(op: np.ndarray, s: np.ndarray, kind: str = "expectation"):
    """<s|op|s> or the variance <op^2> - <op>^2 (real part for variances)."""
    if op.shape != (s.shape[0], s.shape[0]):
        raise DimMismatch(f"operator {op.shape} vs state {s.shape}")
    v = op @ s
    mean = np.vdot(s, v)
    if kind == "expectation":
        return mean
    if kind == "variance":
        return float((np.vdot(v, v) - abs(mean) ** 2).real) if _is_hermitian(op) else np.vdot(s, op @ v) - mean ** 2
    raise BadDescriptor(f"unknown moment kind {kind!r}")


def _is_hermitian(op: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) <= tol * max(1.0, np.max(np.abs(op), initial=0.0)))


def max_hermiticity_error(op: np.ndarray) -> float:
    return float(np.max(np.abs(op - op.conj().T), initial=0.0))
