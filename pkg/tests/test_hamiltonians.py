import math

import numpy as np
import pytest

from sjcm.errors import CutoffTooSmall, SuperradiantPhase, UnboundedSpectrum
from sjcm.fock import HilbertConfig, build_operators, interior
from sjcm.hamiltonians import (HamiltonianKind, _check_bounded, build, conjugation_residual, diagonalized_np, effective_np,
                               full_sjcm, offdiagonal_spin_part, spin_block, transformed_sjcm)
from sjcm.model import ModelParams, derive_parameters, params_from_g

P08 = params_from_g(0.8, 1.0, 1000.0, 0.2)
# ground energies for lam / Omega = 1e-3 from scripts/oracles.py
E0_G02 = -500.04178802724858


def test_every_kind_builds_hermitian():
    c = HilbertConfig(30)
    for kind in HamiltonianKind:
        H = build(kind, P08, c)
        assert np.max(np.abs(H - H.conj().T)) < 1e-12, kind


def test_full_model_decoupled_spectrum():
    c = HilbertConfig(20, include_qubit=True)
    H = full_sjcm(ModelParams(1.0, 7.0, 0.0, 0.0), c)
    ev = np.sort(np.linalg.eigvalsh(H))
    ref = np.sort([n + s * 3.5 for n in range(20) for s in (1, -1)])
    assert np.allclose(ev, ref, atol=1e-12)


def test_full_model_plain_jc_at_zero_drive():
    c = HilbertConfig(10, include_qubit=True)
    o = build_operators(c)
    p = ModelParams(1.0, 50.0, 0.3, 0.0)
    jc = o.n + 25.0 * o.sz + 0.3 * (o.ad @ o.sm + o.a @ o.sp)
    assert np.array_equal(full_sjcm(p, c), jc)
    with pytest.raises(CutoffTooSmall):
        full_sjcm(p, c.field_only())


@pytest.mark.parametrize("G,ref", [(0.0, -500.0), (0.2, E0_G02)])
def test_full_model_small_coupling_ground_state(G, ref):
    c = HilbertConfig(40, include_qubit=True)
    e0 = np.linalg.eigvalsh(full_sjcm(ModelParams(1.0, 1000.0, 1.0, G), c))[0]
    assert e0 == pytest.approx(ref, abs=1e-6)


def test_effective_branch_spacings():
    c = HilbertConfig(160)
    d = derive_parameters(P08)
    k = 20
    for branch, E in (("down", d.E_down), ("up", d.E_up)):
        ev = np.linalg.eigvalsh(effective_np(P08, branch, c))[:k]
        assert np.allclose(np.diff(ev), E, atol=1e-8), branch


def test_effective_trivial_and_errors():
    c = HilbertConfig(10)
    H = effective_np(ModelParams(1.0, 1000.0, 0.0, 0.0), "down", c)
    assert np.array_equal(H, np.diag(np.arange(10.0)) - 500.0 * np.eye(10))
    with pytest.raises(SuperradiantPhase):
        effective_np(ModelParams(1.0, 1000.0, math.sqrt(600.0), 0.2), "down", c)
    with pytest.raises(ValueError):
        effective_np(P08, "sideways", c)


def test_unbounded_guard():
    # validated parameters cannot reach it (omega > 2G and g < 1 imply
    # omega - lam^2/Omega > 2G), so the guard is exercised directly
    _check_bounded(0.5, 0.2, "down")
    with pytest.raises(UnboundedSpectrum):
        _check_bounded(0.4, 0.2, "down")
    with pytest.raises(UnboundedSpectrum):
        _check_bounded(-0.3, 0.2, "up")


def test_diagonalized_form():
    c = HilbertConfig(160)
    d = derive_parameters(P08)
    Hp = diagonalized_np(P08, c)
    k = 40              # squeezing transports cutoff damage down from the top levels
    off = max(np.max(np.abs(np.diag(Hp, 2)[:k])), np.max(np.abs(np.diag(Hp, 1)[:k])))
    assert off < 1e-6
    assert Hp[1, 1] - Hp[0, 0] == pytest.approx(d.E_down, abs=1e-8)
    assert np.allclose(np.diff(np.diag(Hp)[:k].real), d.E_down, atol=1e-8)
    ev_p = np.linalg.eigvalsh(Hp)[:k]
    ev = np.linalg.eigvalsh(effective_np(P08, "down", c))[:k]
    assert np.allclose(ev_p, ev, atol=1e-8)
    p0 = params_from_g(0.5, 1.0, 1000.0, 0.0)
    assert np.allclose(diagonalized_np(p0, HilbertConfig(30)), effective_np(p0, "down", HilbertConfig(30)))


def test_transformed_structure():
    c = HilbertConfig(20, include_qubit=True)
    for order in (1, 2):
        H, S = transformed_sjcm(P08, c, order)
        assert np.max(np.abs(S + S.conj().T)) < 1e-12
        assert np.max(np.abs(H - H.conj().T)) < 1e-12
        assert np.max(np.abs(offdiagonal_spin_part(H, c))) == 0
    p0 = ModelParams(1.0, 1000.0, 0.0, 0.2)
    H, S = transformed_sjcm(p0, c, 2)
    assert np.allclose(H, full_sjcm(p0, c)) and not S.any()


def test_transformed_down_block_is_effective_model():
    c = HilbertConfig(20, include_qubit=True)
    H, _ = transformed_sjcm(P08, c, 1)
    down = spin_block(H, c, "down")
    assert np.max(np.abs(down - effective_np(P08, "down", c.field_only()))) < 1e-12
    up = spin_block(H, c, "up")
    # up block: (omega + lam^2/Omega) n - G(a^2 + a^dag^2) + Omega/2 + lam^2/Omega
    ref = effective_np(P08, "up", c.field_only()) + (P08.Omega / 2 + P08.shift) * np.eye(20)
    assert np.max(np.abs(up - ref)) < 1e-10


def test_conjugation_residual_scaling():
    # the printed series leaves O(beta^-3/2) terms: residual ~ Omega^-3/2
    r = [conjugation_residual(params_from_g(0.8, 1.0, W, 0.2), HilbertConfig(40), 2)["total"]
         for W in (1e3, 2e3, 4e3, 8e3)]
    slopes = -np.diff(np.log(r)) / math.log(2)
    assert np.all(slopes > 1.4) and np.all(slopes < 1.6)
    r1 = [conjugation_residual(params_from_g(0.8, 1.0, W, 0.2), HilbertConfig(40), 1)["offdiag"]
          for W in (1e3, 4e3)]
    assert r1[1] < r1[0]
