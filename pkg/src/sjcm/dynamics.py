"""Unitary propagation by spectral decomposition."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, NonHermitian
from .hamiltonians import HamiltonianKind


def check_hermitian(H: np.ndarray, rtol: float = 1e-10) -> None:
    err = np.max(np.abs(H - H.conj().T), initial=0.0)
    if err > rtol * max(1.0, np.max(np.abs(H), initial=0.0)):
        raise NonHermitian(f"max|H - H^dag| = {err:.3g}")


class Spectrum:
    """Eigendecomposition of a Hermitian matrix, reused for every time."""

    def __init__(self, H: np.ndarray, check: bool = True):
        if check:
            check_hermitian(H)
        if np.isrealobj(H) or not np.any(H.imag):
            w, v = np.linalg.eigh(np.ascontiguousarray(H.real))
        else:
            w, v = np.linalg.eigh((H + H.conj().T) / 2)
        self.energies = w
        self.vectors = v
        self.dim = H.shape[0]

    def unitary(self, t: float) -> np.ndarray:
        v = self.vectors
        return (v * np.exp(-1j * self.energies * t)) @ v.conj().T

    def evolve(self, psi0: np.ndarray, times) -> np.ndarray:
        """States at each time, shape (len(times), dim)."""
        if psi0.shape != (self.dim,):
            raise DimMismatch(f"state of shape {psi0.shape} for dimension {self.dim}")
        times = np.atleast_1d(np.asarray(times, dtype=float))
        c = self.vectors.conj().T @ psi0
        phases = np.exp(-1j * np.outer(times, self.energies))
        return (phases * c) @ self.vectors.T


@dataclass(frozen=True)
class Propagator:
    U: np.ndarray
    t: float
    source: HamiltonianKind | None = None


def propagator(H: np.ndarray, t: float, source: HamiltonianKind | None = None,
               spectrum: Spectrum | None = None) -> Propagator:
    spec = spectrum if spectrum is not None else Spectrum(H)
    return Propagator(spec.unitary(t), float(t), source)


@dataclass
class TimeSeries:
    times: np.ndarray
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        for k, v in self.values.items():
            if len(v) != len(self.times):
                raise ValueError(f"column {k!r} has {len(v)} values for {len(self.times)} times")

    def __getitem__(self, key):
        return self.values[key]


def expectations(states: np.ndarray, op: np.ndarray) -> np.ndarray:
    """<psi_k|op|psi_k> for every row of `states`."""
    if op.shape != (states.shape[1], states.shape[1]):
        raise DimMismatch(f"operator {op.shape} vs states {states.shape}")
    return np.einsum("ki,ki->k", states.conj(), states @ op.T)


def evolve_observable(H: np.ndarray, s0: np.ndarray, obs, times, spectrum: Spectrum | None = None) -> TimeSeries:
    """Expectation values of each observable (list or name->matrix dict)."""
    if not isinstance(obs, dict):
        obs = {f"obs{i}": o for i, o in enumerate(obs)}
    spec = spectrum if spectrum is not None else Spectrum(H)
    states = spec.evolve(s0, times)
    values = {}
    for name, o in obs.items():
        v = expectations(states, o)
        values[name] = v.real if np.allclose(o, o.conj().T) else v
    values["norm"] = np.linalg.norm(states, axis=1)
    return TimeSeries(np.atleast_1d(np.asarray(times, dtype=float)), values)


def time_grid(Delta: float, periods: float = 1.0, points_per_period: int = 512, start: float = 0.0) -> np.ndarray:
    """Uniform grid in units of tau_1 = 2 pi / sqrt(Delta), endpoints included."""
    tau1 = 2 * np.pi / np.sqrt(Delta)
    n = int(round(periods * points_per_period))
    return start + tau1 * periods * np.arange(n + 1) / n
