"""Anchored variance-reduced gradient estimators.

The anchored estimate for component i at x is

    grad f_i(x) - grad f_i(snapshot) + anchor

where anchor is the full gradient at the snapshot. Per-sample link derivatives
at the snapshot are cached at state construction (O(n) scalars), so a single
estimate costs one fresh component gradient. The SAGA table follows the same
linear-model structure: one scalar per sample plus a running average vector.
"""

import numpy as np

__all__ = [
    "EstimatorState",
    "SagaState",
    "full_gradient",
    "svrg_estimate",
    "minibatch_estimate",
    "saga_estimate_and_update",
    "delta_b",
]


def full_gradient(obj, x):
    """(1/n) sum_i grad f_i(x); costs n component evaluations (one pass)."""
    ds = obj.data
    psi = obj.loss.deriv(ds.matvec(x), ds.labels)
    g = ds.rmatvec(psi) / ds.n
    if obj.lam1_in_f:
        g = g + obj.lam1_in_f * x
    return g


class EstimatorState:
    """Snapshot point, cached link derivatives, and the anchor full gradient.

    Snapshot link derivatives are computed with the same per-row dot products
    the inner loop uses, so estimates cancel bitwise when x equals the
    snapshot.
    """

    __slots__ = ("snapshot", "link_deriv", "anchor_grad", "lam1_f")

    def __init__(self, obj, snapshot):
        ds = obj.data
        self.snapshot = np.array(snapshot, dtype=np.float64)
        z = np.fromiter((ds.row_dot(i, self.snapshot) for i in range(ds.n)),
                        dtype=np.float64, count=ds.n)
        self.link_deriv = np.asarray(obj.loss.deriv(z, ds.labels),
                                     dtype=np.float64)
        self.lam1_f = obj.lam1_in_f
        anchor = ds.rmatvec(self.link_deriv) / ds.n
        if self.lam1_f:
            anchor = anchor + self.lam1_f * self.snapshot
        self.anchor_grad = anchor


def svrg_estimate(state, obj, i, x):
    """grad f_i(x) - grad f_i(snapshot) + anchor; unbiased for full_gradient(x)."""
    ds = obj.data
    z = ds.row_dot(i, x)
    dcoef = float(obj.loss.deriv(z, ds.labels[i])) - state.link_deriv[i]
    if state.lam1_f:
        out = state.anchor_grad + state.lam1_f * (x - state.snapshot)
    else:
        out = state.anchor_grad.copy()
    ds.add_row(out, i, dcoef)
    return out


def minibatch_estimate(state, obj, batch, x):
    """(1/b) sum_{i in batch} [grad f_i(x) - grad f_i(snapshot)] + anchor.

    With b = n this reproduces the full gradient (zero variance); with b = 1
    it equals svrg_estimate for the same index.
    """
    ds = obj.data
    b = len(batch)
    if not 1 <= b <= ds.n:
        raise ValueError(f"batch size {b} out of range [1, {ds.n}]")
    if state.lam1_f:
        out = state.anchor_grad + state.lam1_f * (x - state.snapshot)
    else:
        out = state.anchor_grad.copy()
    inv_b = 1.0 / b
    for i in batch:
        z = ds.row_dot(i, x)
        dcoef = float(obj.loss.deriv(z, ds.labels[i])) - state.link_deriv[i]
        ds.add_row(out, i, dcoef * inv_b)
    return out


class SagaState:
    """Stored link derivative per sample plus the running table average.

    The table is initialized with component gradients at the starting point,
    which costs one extra effective pass (callers account for it). Objectives
    must keep the l2 term in g (the scalar table encodes bare loss gradients).
    """

    __slots__ = ("link_deriv", "avg_grad")

    def __init__(self, obj, x0):
        if obj.fold_l2:
            raise ValueError("SAGA stores scalar link derivatives; keep the "
                             "l2 term in g (fold_l2=False)")
        ds = obj.data
        x0 = np.asarray(x0, dtype=np.float64)
        z = np.fromiter((ds.row_dot(i, x0) for i in range(ds.n)),
                        dtype=np.float64, count=ds.n)
        self.link_deriv = np.asarray(obj.loss.deriv(z, ds.labels),
                                     dtype=np.float64).copy()
        self.avg_grad = ds.rmatvec(self.link_deriv) / ds.n

    def table_average(self, obj):
        """Recompute the average from the table (brute force, for checks)."""
        return obj.data.rmatvec(self.link_deriv) / obj.data.n


def saga_estimate_and_update(state, obj, i, x):
    """Return grad f_i(x) - stored_i + table average, then refresh entry i.

    The running average is updated in O(support of a_i).
    """
    ds = obj.data
    z = ds.row_dot(i, x)
    new = float(obj.loss.deriv(z, ds.labels[i]))
    old = state.link_deriv[i]
    out = state.avg_grad.copy()
    ds.add_row(out, i, new - old)
    state.link_deriv[i] = new
    ds.add_row(state.avg_grad, i, (new - old) / ds.n)
    return out


def delta_b(n, b):
    """Variance shrinkage factor (n - b) / ((n - 1) b) in [0, 1]."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= b <= n:
        raise ValueError(f"batch size {b} out of range [1, {n}]")
    return (n - b) / ((n - 1) * b)
