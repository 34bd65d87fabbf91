"""Independent numerical oracles and closed-form rate calculators.

Everything here is deliberately implemented by a different route than the
solver/estimator code paths (finite differences, dense linear algebra, brute
force enumeration) so the two sides can check each other.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .estimator import delta_b, EstimatorState, minibatch_estimate, svrg_estimate
from .model import objective_value, smoothness_constant
from .prox import prox_apply

__all__ = [
    "finite_diff_grad",
    "ridge_closed_form",
    "RateReport",
    "theoretical_rate_sc",
    "assumption_c_estimate",
    "VarianceReport",
    "variance_bound_report",
    "eigen_oracle",
    "prox_grid_oracle",
]


def finite_diff_grad(fn, x, h=1e-6):
    """Central-difference gradient of a scalar field; error O(h^2)."""
    if h <= 0:
        raise ValueError("step h must be positive")
    x = np.asarray(x, dtype=np.float64)
    g = np.empty_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h
        g[j] = (fn(x + e) - fn(x - e)) / (2.0 * h)
    return g


def ridge_closed_form(ds, lam1):
    """Minimizer of (1/2n)||Ax - b||^2 + (lam1/2)||x||^2 by a dense solve."""
    A = ds.to_dense()
    H = A.T @ A / ds.n + lam1 * np.eye(ds.d)
    rhs = A.T @ ds.labels / ds.n
    try:
        return np.linalg.solve(H, rhs)
    except np.linalg.LinAlgError:
        raise ValueError("singular normal equations; need lam1 > 0 or "
                         "full-rank data") from None


@dataclass(frozen=True)
class RateReport:
    """Geometric per-epoch contraction factor for the strongly convex regime."""

    rho: float
    L: float
    mu: float
    eta: float
    m: int
    c: float
    option: str
    convergent: bool


def theoretical_rate_sc(L, mu, eta, m, c, option="II"):
    """Closed-form per-epoch rate for the strongly convex analysis.

    Option II covers the snapshot that averages iterates 1..m-1 with the next
    epoch starting at x_m; option I covers the all-iterates average. Requires
    L*eta < 1/3. The constant c relates the epoch-start gap to the snapshot
    gap and must be measured, never guessed.
    """
    if option not in ("I", "II"):
        raise ValueError(f"option must be 'I' or 'II', got {option!r}")
    if m < 2:
        raise ValueError("need m >= 2")
    if mu <= 0 or c <= 0:
        raise ValueError("need mu > 0 and c > 0")
    if not L * eta < 1.0 / 3.0:
        raise ValueError("step size must satisfy L*eta < 1/3 for this rate")
    denom = 1.0 - 3.0 * L * eta
    if option == "II":
        rho = (2.0 * L * eta * (m + c) / ((m - 1) * denom)
               + c * (1.0 - L * eta) / (mu * eta * (m - 1) * denom))
    else:
        rho = (2.0 * L * eta * (m + c) / (m * denom)
               + c * (1.0 - L * eta) / (m * mu * eta * denom))
    return RateReport(rho=float(rho), L=L, mu=mu, eta=eta, m=m, c=c,
                      option=option, convergent=rho < 1.0)


def assumption_c_estimate(f_start, f_snap_prev, fstar, m=None):
    """Per-epoch ratio c_s = [F(x_0^s) - F*] / [F(snapshot_{s-1}) - F*].

    Epochs whose snapshot gap has vanished are marked converged (NaN entry).
    Returns (c, c/m) when m is given, else c alone.
    """
    f_start = np.asarray(f_start, dtype=np.float64)
    f_snap_prev = np.asarray(f_snap_prev, dtype=np.float64)
    num = f_start - fstar
    den = f_snap_prev - fstar
    c = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)
    if m is None:
        return c
    return c, c / m


@dataclass(frozen=True)
class VarianceReport:
    """Exact estimator variance against the 4 L delta(b) [gaps] bound."""

    lhs: float
    rhs: float
    delta: float
    b: int
    satisfied: bool


def variance_bound_report(obj, x, xtilde, xstar, b=1, max_enum=12):
    """Enumerated estimator variance vs. the composite-gap bound.

    lhs is the exact expected squared deviation of the anchored estimate from
    the mean gradient (all indices for b=1, all size-b subsets otherwise);
    rhs = 4 L delta(b) [F(x)-F(x*) + F(xtilde)-F(x*)] with L taken for the
    loss-plus-l2 composite (the analysis folds g into every component).
    Rejects l1 terms, which fall outside the smooth analysis.
    """
    if obj.lam2 != 0.0:
        raise ValueError("variance bound applies to smooth objectives only")
    n = obj.data.n
    if b > 1 and n > max_enum:
        raise ValueError(f"subset enumeration capped at n <= {max_enum}")
    # estimator deviations are invariant to the deterministic l2 shift, so the
    # bare-loss estimator can be enumerated as-is
    state = EstimatorState(obj, xtilde)
    mean_grad = np.zeros(obj.d)
    ests = [svrg_estimate(state, obj, i, x) for i in range(n)]
    mean_grad = np.mean(ests, axis=0)
    if b == 1:
        lhs = float(np.mean([np.sum((e - mean_grad) ** 2) for e in ests]))
    else:
        devs = []
        for subset in combinations(range(n), b):
            e = minibatch_estimate(state, obj, np.array(subset), x)
            devs.append(np.sum((e - mean_grad) ** 2))
        lhs = float(np.mean(devs))
    L_eff = smoothness_constant(obj) + obj.lam1_in_g
    gaps = (objective_value(obj, x) - objective_value(obj, xstar)
            + objective_value(obj, xtilde) - objective_value(obj, xstar))
    d_b = delta_b(n, b)
    rhs = 4.0 * L_eff * d_b * gaps
    # tiny roundoff slack: lhs is an exact enumeration, rhs an analytic bound
    return VarianceReport(lhs=lhs, rhs=float(rhs), delta=d_b, b=b,
                          satisfied=lhs <= rhs * (1 + 1e-9) + 1e-15)


def eigen_oracle(ds):
    """Leading eigenpair of C = (1/n) sum_i a_i a_i^T by dense decomposition."""
    A = ds.to_dense()
    C = A.T @ A / ds.n
    vals, vecs = np.linalg.eigh(C)
    lam_max = float(vals[-1])
    return lam_max, vecs[:, -1].copy()


def prox_grid_oracle(spec, y, lo=-2.0, hi=2.0, step=1e-4):
    """Brute-force 1-D prox: grid-minimize (x-y)^2/(2 eta) + g(x)."""
    grid = np.arange(lo, hi + step, step)
    reg = spec.reg
    vals = (grid - y) ** 2 / (2.0 * spec.eta)
    if reg.lam1:
        vals = vals + 0.5 * reg.lam1 * grid ** 2
    if reg.lam2:
        vals = vals + reg.lam2 * np.abs(grid)
    return float(grid[np.argmin(vals)])
