"""Finite differences and truncation certificates shared by the sensing modules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, StepUnderflow


@dataclass(frozen=True)
class Derivative:
    value: np.ndarray           # Richardson-extrapolated central difference
    coarse: np.ndarray          # central difference with step h
    fine: np.ndarray            # central difference with step h/2
    disagreement: float         # max|coarse - fine| / max|fine|
    center: np.ndarray | None   # f(x), when requested


def central_derivative(f, x: float, h: float, rtol: float = 1e-6, with_center: bool = False,
                       measure=None) -> Derivative:
    """d f / d x by central differences at h and h/2, accepted only when the
    two agree to `rtol` relative (max-norm over all outputs of f, or over
    `measure(output)` when given, e.g. a block away from a cutoff edge)."""
    if not h > 0 or h < 1e-12 * abs(x):
        raise StepUnderflow(f"step {h:.3g} unresolvable at x = {x:.6g}")
    fp, fm = np.asarray(f(x + h)), np.asarray(f(x - h))
    fp2, fm2 = np.asarray(f(x + h / 2)), np.asarray(f(x - h / 2))
    coarse = (fp - fm) / (2 * h)
    fine = (fp2 - fm2) / h
    m = measure if measure is not None else (lambda z: z)
    scale = np.max(np.abs(m(fine)), initial=0.0)
    diff = np.max(np.abs(m(coarse) - m(fine)), initial=0.0)
    dis = diff / scale if scale > 0 else (0.0 if diff == 0 else np.inf)
    if dis > rtol:
        raise ConvergenceError(f"finite-difference estimates at h and h/2 disagree by {dis:.3g} (> {rtol:.1g})")
    center = np.asarray(f(x)) if with_center else None
    return Derivative((4 * fine - coarse) / 3, coarse, fine, float(dis), center)


def relative_residual(a, b, floor: float = 1e-300) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.max(np.abs(b), initial=0.0), floor)
    return float(np.max(np.abs(a - b), initial=0.0) / scale)


def certify(compute, cfg, enabled: bool = True):
    """Run `compute(cfg)` and, if enabled, `compute(cfg.doubled())`.

    `compute` returns (result, probe) where probe is an array (or a list of
    arrays) of the reported numbers; the residual is the largest change of
    any probe array under doubling, relative to max(max|probe|, 1) so that
    order-one signals passing through zero are not over-weighted.
    Returns (result, residual) with residual NaN when disabled.
    """
    result, probe = compute(cfg)
    if not enabled:
        return result, float("nan")
    _, probe2 = compute(cfg.doubled())
    if isinstance(probe, (list, tuple)):
        return result, max(relative_residual(a, b, 1.0) for a, b in zip(probe, probe2))
    return result, relative_residual(probe, probe2, 1.0)
