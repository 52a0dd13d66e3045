"""Finite frequency-ratio effects: the full model against its effective limit.

Frequencies are in units of omega (omega = 1). beta1 = Omega/omega and
beta2 = Omega/G; the effective description needs both large and
Delta >> beta^(-1/3) with beta = min(beta1, beta2).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Spectrum, expectations
from .errors import InvalidParams
from .fock import HilbertConfig, build_operators, make_state
from .hamiltonians import auto_cutoff, full_sjcm
from .homodyne import analytic_signals
from .model import ModelParams, derive_parameters, params_from_g
from .numerics import central_derivative, certify as run_certified

VALIDITY_MARGIN = 5.0


class Linkage(enum.Enum):
    # beta1 = 10 beta2 taken literally gives G = 10 omega, outside omega > 2G;
    # kept so the reading is explicit, and it always raises.
    BETA1_EQUALS_10_BETA2 = "beta1_equals_10_beta2"
    # beta2 = 10 beta1, i.e. G = omega / 10: the reading used for the sweeps.
    BETA2_EQUALS_10_BETA1 = "beta2_equals_10_beta1"
    FIXED_G = "fixed_G"


@dataclass(frozen=True)
class FiniteRatioScenario:
    g: float
    G_over_omega: float
    beta1: float
    linkage: Linkage = Linkage.FIXED_G
    tau: float | None = None          # default: 2 pi / sqrt(Delta) of the effective model
    n_max: int | None = None          # default: auto cutoff

    @classmethod
    def linked(cls, g: float, beta: float, linkage: Linkage | str, G_over_omega: float | None = None, **kw):
        linkage = Linkage(linkage)
        if linkage is Linkage.BETA1_EQUALS_10_BETA2:
            G = 10.0
        elif linkage is Linkage.BETA2_EQUALS_10_BETA1:
            G = 0.1
        else:
            if G_over_omega is None:
                raise InvalidParams("fixed_G linkage needs G_over_omega")
            G = G_over_omega
        if not 1 - 2 * G > 0:
            raise InvalidParams(f"linkage {linkage.value} implies G/omega = {G:g}, violating omega > 2G")
        return cls(g, G, beta, linkage, **kw)

    @property
    def beta2(self) -> float:
        return self.beta1 / self.G_over_omega if self.G_over_omega > 0 else math.inf

    @property
    def params(self) -> ModelParams:
        return params_from_g(self.g, 1.0, self.beta1, self.G_over_omega)

    @property
    def evolution_time(self) -> float:
        return self.tau if self.tau is not None else 2 * math.pi / math.sqrt(derive_parameters(self.params).Delta)


@dataclass
class CorrectionResult:
    scenario: FiniteRatioScenario
    inverted_variance_full: float
    inverted_variance_effective: float
    x_mean_full: float
    x_var_full: float
    n_max: int
    residual: float

    @property
    def ratio(self) -> float:
        return self.inverted_variance_full / self.inverted_variance_effective


def full_model_cutoff(p: ModelParams) -> int:
    return auto_cutoff(p, n0=1) + 16


def full_model_quadrature(p: ModelParams, t, cfg: HilbertConfig, field_state="phi_std"):
    """<X>_t and Var X_t for |down> (x) phi evolved under the full Hamiltonian."""
    c = cfg.with_qubit()
    o = build_operators(c)
    psi0 = make_state(("product", "down", field_state), c)
    psi = Spectrum(full_sjcm(p, c)).evolve(psi0, np.atleast_1d(t))
    xm = expectations(psi, o.X).real
    xv = expectations(psi, (o.X @ o.X).real).real - xm ** 2
    return xm, xv


def full_model_inverted_variance(sc: FiniteRatioScenario, cfg: HilbertConfig | None = None,
                                 certify: bool = True, rel_step: float = 1e-3) -> CorrectionResult:
    """Inverted variance chi_g^2 / Var X at t = tau for the full model, with
    the effective-model value at the same (g, omega, G, tau).

    chi_g is a Richardson-checked central difference in g at fixed Omega
    (step rel_step (1 - g)); the large qubit splitting limits the usable
    step from below.
    """
    p = sc.params
    t = sc.evolution_time
    if cfg is None:
        cfg = HilbertConfig(sc.n_max or full_model_cutoff(p))
    g = sc.g

    def compute(c: HilbertConfig):
        der = central_derivative(lambda x: full_model_quadrature(p.with_g(x), t, c)[0], g,
                                 rel_step * (1 - g), rtol=1e-4)
        xm, xv = full_model_quadrature(p, t, c)
        chi = float(der.value[0])
        val = chi ** 2 / float(xv[0])
        return (val, float(xm[0]), float(xv[0]), c.n_max), np.array([val, xm[0], xv[0]])

    (val, xm, xv, n), res = run_certified(compute, cfg.field_only(), enabled=certify)
    eff = analytic_signals(p, t)
    return CorrectionResult(sc, val, float(eff.inverted_variance_g), xm, xv, n, res)


@dataclass(frozen=True)
class CorrectionOrders:
    x_corr_order: float
    var_corr_order: float
    beta: float


def correction_order_estimates(p: ModelParams) -> CorrectionOrders:
    """beta^-1 Delta^-5/2 and beta^-1 Delta^-3 with beta = min(beta1, beta2)."""
    d = derive_parameters(p)
    beta = min(d.beta1, d.beta2)
    inv = 0.0 if math.isinf(beta) else 1 / beta
    return CorrectionOrders(inv * d.Delta ** -2.5, inv * d.Delta ** -3, beta)


def is_valid(Delta: float, beta: float, margin: float = VALIDITY_MARGIN) -> bool:
    return Delta >= margin * beta ** (-1 / 3)


CORRECTION_COLUMNS = ["g", "beta1", "beta2", "G", "Delta", "beta_inv_cuberoot", "tau",
                      "inv_var_full", "inv_var_effective", "ratio", "valid", "n_max", "residual"]


def correction_row(r: CorrectionResult, margin: float = VALIDITY_MARGIN) -> dict:
    sc = r.scenario
    d = derive_parameters(sc.params)
    beta = min(sc.beta1, sc.beta2)
    return dict(g=sc.g, beta1=sc.beta1, beta2=sc.beta2, G=sc.G_over_omega, Delta=d.Delta,
                beta_inv_cuberoot=beta ** (-1 / 3), tau=sc.evolution_time, inv_var_full=r.inverted_variance_full,
                inv_var_effective=r.inverted_variance_effective, ratio=r.ratio,
                valid=int(is_valid(d.Delta, beta, margin)), n_max=r.n_max, residual=r.residual)


def correction_ratio_sweep(scs, margin: float = VALIDITY_MARGIN, certify: bool = True, map_fn=map):
    """One row per scenario; rows are in scenario order whatever `map_fn` does."""
    from .table import SweepTable

    results = list(map_fn(lambda sc: full_model_inverted_variance(sc, certify=certify), scs))
    return SweepTable(CORRECTION_COLUMNS, [correction_row(r, margin) for r in results])
