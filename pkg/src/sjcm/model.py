"""Physical parameters of the squeezed Jaynes-Cummings model and the scalars
derived from them (coupling ratio, gap, squeezing parameters, spectral ratio).

Units: hbar = 1, all frequencies in the same (arbitrary) unit; configs use
omega = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvalidParams, SuperradiantPhase


@dataclass(frozen=True)
class ModelParams:
    omega: float
    Omega: float
    lam: float
    G: float

    def __post_init__(self):
        if not self.omega > 0 or not self.Omega > 0:
            raise InvalidParams(f"omega and Omega must be positive, got {self.omega}, {self.Omega}")
        if self.lam < 0 or self.G < 0:
            raise InvalidParams(f"lam and G must be non-negative, got {self.lam}, {self.G}")
        if not self.omega - 2 * self.G > 0:
            raise InvalidParams(f"need omega - 2G > 0, got omega={self.omega}, G={self.G}")

    @property
    def shift(self) -> float:
        """lam^2 / Omega, the dispersive frequency shift."""
        return self.lam ** 2 / self.Omega

    @property
    def g(self) -> float:
        return self.lam / math.sqrt(self.Omega * (self.omega - 2 * self.G))

    def with_g(self, g: float) -> "ModelParams":
        # Effective and full observables are even in lam, so |g| is exact for
        # finite-difference stencils that straddle g = 0.
        return replace(self, lam=coupling_from_g(abs(g), self.omega, self.Omega, self.G))

    def with_omega(self, omega: float) -> "ModelParams":
        return replace(self, omega=omega)


def params_from_g(g: float, omega: float = 1.0, Omega: float = 1000.0, G: float = 0.0) -> ModelParams:
    return ModelParams(omega, Omega, coupling_from_g(g, omega, Omega, G), G)


@dataclass(frozen=True)
class DerivedQuantities:
    g: float
    alpha: float
    Delta: float
    r_down: float
    r_up: float
    E_up: float
    E_down: float
    R: float
    R_frac: float
    beta1: float
    beta2: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def coupling_from_g(g: float, omega: float, Omega: float, G: float) -> float:
    if g < 0:
        raise InvalidParams(f"g must be non-negative, got {g}")
    if not omega - 2 * G > 0:
        raise InvalidParams(f"need omega - 2G > 0, got omega={omega}, G={G}")
    return g * math.sqrt(Omega * (omega - 2 * G))


def alpha_of(g: float, omega: float, G: float) -> float:
    return (omega - 2 * G) * (1 - g * g) / 2


def delta_of(alpha: float, G: float) -> float:
    return 16 * alpha * (alpha + 2 * G)


def derive_parameters(p: ModelParams) -> DerivedQuantities:
    g = p.g
    if g >= 1:
        raise SuperradiantPhase(f"g = {g:.12g} >= 1: outside the normal phase")
    alpha = alpha_of(g, p.omega, p.G)
    Delta = delta_of(alpha, p.G)
    if Delta <= 0:
        raise SuperradiantPhase(f"Delta = {Delta:.3g} <= 0")
    w_dn = p.omega - p.shift
    w_up = p.omega + p.shift
    args = (w_dn - 2 * p.G, w_dn + 2 * p.G, w_up - 2 * p.G, w_up + 2 * p.G)
    if min(args) <= 0:
        raise InvalidParams(f"non-positive log argument in squeezing parameters: {args}")
    E_dn = math.sqrt(args[0] * args[1])
    E_up = math.sqrt(args[2] * args[3])
    R = E_up / E_dn
    return DerivedQuantities(
        g=g,
        alpha=alpha,
        Delta=Delta,
        r_down=0.25 * math.log(args[0] / args[1]),
        r_up=0.25 * math.log(args[2] / args[3]),
        E_up=E_up,
        E_down=E_dn,
        R=R,
        R_frac=R - math.floor(R),
        beta1=p.Omega / p.omega,
        beta2=p.Omega / p.G if p.G > 0 else math.inf,
    )


def spectral_ratio(p: ModelParams) -> tuple[float, float]:
    d = derive_parameters(p)
    return d.R, d.R_frac


def spectral_ratio_of_g(g: float, omega: float, G: float) -> float:
    """R(g); independent of Omega once the coupling is expressed through g."""
    s = g * g * (omega - 2 * G)
    return math.sqrt(((omega + s) ** 2 - 4 * G * G) / ((omega - s) ** 2 - 4 * G * G))


def tau(Delta: float, n: int = 1) -> float:
    """tau_n = 2 n pi / sqrt(Delta)."""
    return 2 * n * math.pi / math.sqrt(Delta)
