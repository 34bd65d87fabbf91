"""Proximal operators argmin_x { ||x - y||^2 / (2 eta) + g(x) }.

Closed forms for all supported regularizers, plus an optimality residual used
as an independent check (zero iff the candidate is the prox point).
"""

from dataclasses import dataclass

import numpy as np

from .model import Regularizer

__all__ = ["ProxSpec", "prox_apply", "prox_optimality_residual", "soft_threshold"]


@dataclass(frozen=True)
class ProxSpec:
    """Regularizer plus step size eta > 0."""

    reg: Regularizer
    eta: float

    def __post_init__(self):
        if not (np.isfinite(self.eta) and self.eta > 0):
            raise ValueError(f"step must be finite and positive, got {self.eta}")


def soft_threshold(y, t):
    """sign(y) * max(|y| - t, 0); |y| = t maps to exactly 0."""
    return np.sign(y) * np.maximum(np.abs(y) - t, 0.0)


def prox_apply(spec, y):
    """Evaluate the prox of g = (lam1/2)||.||^2 + lam2 ||.||_1 at y.

    l1 soft-thresholds, l2 shrinks by 1/(1 + lam1 eta), elastic net does both
    (threshold first, then shrink).
    """
    y = np.asarray(y, dtype=np.float64)
    lam1, lam2 = spec.reg.lam1, spec.reg.lam2
    out = y
    if lam2:
        out = soft_threshold(out, lam2 * spec.eta)
    if lam1:
        out = out / (1.0 + lam1 * spec.eta)
    if out is y:
        out = y.copy()
    return out


def prox_optimality_residual(spec, y, x):
    """Norm of the smallest element of (x - y)/eta + dg(x).

    Smooth terms contribute exactly; on coordinates with x_j = 0 the l1
    subdifferential is [-lam2, lam2], so the best choice shrinks the residual
    toward zero. Returns 0 (within roundoff) iff x = prox_apply(spec, y).
    """
    y = np.asarray(y, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    lam1, lam2 = spec.reg.lam1, spec.reg.lam2
    v = (x - y) / spec.eta + lam1 * x
    if lam2:
        r = np.where(x != 0.0, v + lam2 * np.sign(x), soft_threshold(v, lam2))
    else:
        r = v
    return float(np.linalg.norm(np.atleast_1d(r)))
