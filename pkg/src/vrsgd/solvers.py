"""Epoch-based variance-reduced solvers and deterministic baselines."""

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset, make_rng, sample_index, sample_minibatch, uniform_scheme
from .diagnostics import eigen_oracle
from .estimator import (
    EstimatorState,
    SagaState,
    full_gradient,
    minibatch_estimate,
    saga_estimate_and_update,
    svrg_estimate,
)
from .lazy import LazyVector
from .model import Objective, component_gradient, make_objective, objective_value
from .prox import ProxSpec, prox_apply

__all__ = [
    "SolverConfig",
    "RunRecord",
    "learning_rate",
    "snapshot_update",
    "final_output_select",
    "epoch_lengths",
    "run_vr_sgd",
    "run_svrg",
    "run_prox_svrg",
    "run_vr_sgd_pp",
    "run_momentum_vr_sgd",
    "run_saga",
    "run_katyusha",
    "run_deterministic",
    "run_eigen",
    "run_solver",
]

_DIVERGENCE_FACTOR = 1e12
_SNAPSHOT_ALIASES = {
    "I": "last",
    "II": "average",
    "III": "average-last",
    "last": "last",
    "average": "average",
    "average-last": "average-last",
    "average-excl-last": "average-excl-last",
}


def learning_rate(s, eta0, alpha):
    """Decaying-then-flat epoch step size eta0 / max(alpha, 2/(s+1))."""
    if s < 1:
        raise ValueError("epoch index starts at 1")
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if eta0 <= 0.0:
        raise ValueError("eta0 must be positive")
    return eta0 / max(alpha, 2.0 / (s + 1.0))


def snapshot_update(option, iterates):
    """Compute (snapshot, next_start) from one epoch's iterates x_1..x_m."""
    option = _canon_snapshot(option)
    arr = np.asarray(iterates, dtype=np.float64)
    if arr.shape[0] < 1:
        raise ValueError("need at least one iterate")
    last = np.array(arr[-1])
    if option == "last":
        return last, np.array(last)
    if option == "average":
        avg = arr.mean(axis=0)
        return avg, np.array(avg)
    if option == "average-last":
        return arr.mean(axis=0), last
    if arr.shape[0] < 2:
        raise ValueError("average-excl-last needs at least two iterates")
    return arr[:-1].mean(axis=0), last


def _canon_snapshot(option):
    try:
        return _SNAPSHOT_ALIASES[option]
    except KeyError:
        raise ValueError(f"unknown snapshot option {option!r}") from None


def final_output_select(snapshot, snapshot_mean, obj):
    """Pick the better of the last snapshot and the mean of all snapshots."""
    if objective_value(obj, snapshot) <= objective_value(obj, snapshot_mean):
        return np.array(snapshot)
    return np.array(snapshot_mean)


def epoch_lengths(m1, rho, m, epochs):
    """Growing inner-loop lengths m_1, min(floor(rho*m_s), m), ... capped at m."""
    if m1 < 1 or m < 1:
        raise ValueError("epoch lengths must be positive")
    if rho <= 1.0:
        raise ValueError("growth factor must exceed 1")
    out = []
    ms = int(m1)
    for _ in range(int(epochs)):
        out.append(ms)
        if ms < m:
            ms = min(math.floor(rho * ms), m)
    return out


@dataclass(frozen=True)
class SolverConfig:
    """Settings shared by the stochastic solvers.

    `m` defaults to 2n; `eta0` to 1/(4L) for the anchored methods. `snapshot`
    accepts "last", "average", "average-last", "average-excl-last" (aliases
    I/II/III for the first three). `update_rule` is "smooth" (explicit
    regularizer gradient) or "prox"; `lazy` is "auto"/"on"/"off". `method`
    selects the deterministic or eigen iteration and `variant` the
    accelerated update form when dispatching by `algorithm` name.
    """

    algorithm: str = "vr_sgd"
    epochs: int = 10
    m: int | None = None
    eta0: float | None = None
    alpha: float = 0.2
    lr_mode: str = "varying"
    snapshot: str = "average-last"
    update_rule: str = "prox"
    batch: int = 1
    seed: int = 0
    rho: float = 1.75
    m1: int | None = None
    w1: float | None = None
    momentum_option: str = "I"
    method: str | None = None
    variant: str = "II"
    lazy: str = "auto"
    x0: np.ndarray | None = None
    fstar: float | None = None
    record_iterates: bool = False

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be positive")
        if self.lr_mode not in ("fixed", "varying"):
            raise ValueError("lr_mode must be 'fixed' or 'varying'")
        if self.update_rule not in ("smooth", "prox"):
            raise ValueError("update_rule must be 'smooth' or 'prox'")
        if self.batch < 1:
            raise ValueError("batch must be positive")
        if self.lazy not in ("auto", "on", "off"):
            raise ValueError("lazy must be 'auto', 'on', or 'off'")
        if self.momentum_option not in ("I", "II"):
            raise ValueError("momentum_option must be 'I' or 'II'")
        _canon_snapshot(self.snapshot)


@dataclass
class RunRecord:
    """Per-epoch trace of one solver run."""

    algorithm: str
    seed: int
    epochs: list = field(default_factory=list)
    passes: list = field(default_factory=list)
    seconds: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    gap: list = field(default_factory=list)
    f_start: list = field(default_factory=list)
    x_final: np.ndarray | None = None
    diverged: bool = False
    coord_updates: int = 0
    iterates: list | None = None

    def append(self, epoch, passes, seconds, obj_val, fstar, f_start=None):
        self.epochs.append(int(epoch))
        self.passes.append(float(passes))
        self.seconds.append(float(seconds))
        self.objective.append(float(obj_val))
        self.gap.append(float(obj_val - fstar) if fstar is not None else float("nan"))
        if f_start is not None:
            self.f_start.append(float(f_start))


def _resolve(cfg, obj):
    """Fill in data-dependent defaults (m, eta0, x0)."""
    from .model import smoothness_constant

    m = cfg.m if cfg.m is not None else 2 * obj.n
    eta0 = cfg.eta0 if cfg.eta0 is not None else 1.0 / (4.0 * smoothness_constant(obj))
    x0 = np.zeros(obj.d) if cfg.x0 is None else np.array(cfg.x0, dtype=np.float64)
    if x0.shape != (obj.d,):
        raise ValueError("x0 has the wrong dimension")
    return m, eta0, x0


def _check_divergence(fval, f0):
    return not math.isfinite(fval) or fval > _DIVERGENCE_FACTOR * max(f0, 1e-30)


def _epoch_eta(cfg, eta0, s):
    if cfg.lr_mode == "fixed":
        return eta0
    return learning_rate(s, eta0, cfg.alpha)


def _use_lazy(cfg, obj):
    if cfg.lazy == "off":
        return False
    sparse_ok = obj.data.is_sparse and cfg.batch == 1 and not cfg.record_iterates
    if cfg.lazy == "on":
        if not sparse_ok:
            raise ValueError("lazy updates need sparse single-sample data "
                             "without iterate recording")
        return True
    return sparse_ok


def _dense_epoch(obj, state, x, eta, m, rng, scheme, cfg, record):
    """One anchored epoch, dense updates. Returns (x_m, sum of iterates)."""
    lam1_g = obj.lam1_in_g
    use_prox = cfg.update_rule == "prox"
    spec = ProxSpec(obj.reg, eta) if use_prox else None
    acc = np.zeros(obj.d)
    b = cfg.batch
    iterates = record.iterates
    for _ in range(m):
        if b == 1:
            i = sample_index(rng, scheme, obj.n)
            g = svrg_estimate(state, obj, i, x)
        else:
            batch = sample_minibatch(rng, obj.n, b)
            g = minibatch_estimate(state, obj, batch, x)
        if use_prox:
            x = prox_apply(spec, x - eta * g)
        else:
            if lam1_g:
                g += lam1_g * x
            x = x - eta * g
        acc += x
        if iterates is not None:
            iterates.append(x.copy())
    record.coord_updates += m * obj.d
    return x, acc


def _lazy_epoch(obj, state, x, eta, m, rng, scheme, cfg, record):
    """One anchored epoch with just-in-time coordinate updates (sparse rows)."""
    ds = obj.data
    lam1_f = obj.lam1_in_f
    lam1_g = obj.lam1_in_g
    lam2 = obj.lam2
    mu = state.anchor_grad
    d_vec = -eta * (mu - lam1_f * state.snapshot)
    if cfg.update_rule == "smooth":
        c0 = 1.0 - eta * (lam1_f + lam1_g)
        tau, c2 = 0.0, 1.0
    else:
        c0 = 1.0 - eta * lam1_f
        tau = eta * lam2
        c2 = 1.0 / (1.0 + eta * lam1_g)
    lv = LazyVector(x, c0, d_vec, tau, c2)
    link = state.link_deriv
    loss_deriv = obj.loss.deriv
    labels = ds.labels
    for k in range(m):
        i = sample_index(rng, scheme, obj.n)
        idx, vals = ds.row(i)
        xi = lv.catch_up(idx, k)
        z = float(np.dot(vals, xi))
        delta = float(loss_deriv(z, labels[i])) - link[i]
        lv.apply_step(idx, k, -eta * delta * vals)
    x, acc = lv.flush(m)
    record.coord_updates += lv.updates
    return x, acc


def _run_anchored(obj, cfg, algorithm, lengths=None):
    """Shared engine: anchor pass, inner loop, snapshot rule, output choice."""
    m, eta0, x0 = _resolve(cfg, obj)
    if lengths is None:
        lengths = [m] * cfg.epochs
    option = _canon_snapshot(cfg.snapshot)
    if cfg.update_rule == "smooth" and not obj.g_is_smooth:
        raise ValueError("the smooth update rule needs a differentiable "
                         "regularizer; use update_rule='prox'")
    rng = make_rng(cfg.seed)
    scheme = uniform_scheme()
    lazy = _use_lazy(cfg, obj)
    record = RunRecord(algorithm=algorithm, seed=cfg.seed)
    if cfg.record_iterates:
        record.iterates = []
    xs = x0
    x = x0.copy()
    snap_sum = np.zeros(obj.d)
    f0 = objective_value(obj, x0)
    inner_total = 0
    t0 = time.perf_counter()
    for s, ms in enumerate(lengths, start=1):
        eta = _epoch_eta(cfg, eta0, s)
        state = EstimatorState(obj, xs)
        f_start = objective_value(obj, x)
        epoch_fn = _lazy_epoch if lazy else _dense_epoch
        x_end, acc = epoch_fn(obj, state, x, eta, ms, rng, scheme, cfg, record)
        if option == "last":
            xs = x_end.copy()
            x = x_end
        elif option == "average":
            xs = acc / ms
            x = xs.copy()
        elif option == "average-last":
            xs = acc / ms
            x = x_end
        else:  # average-excl-last
            if ms < 2:
                raise ValueError("average-excl-last needs m >= 2")
            xs = (acc - x_end) / (ms - 1)
            x = x_end
        snap_sum += xs
        inner_total += ms
        fval = objective_value(obj, xs)
        record.append(s, s + inner_total / obj.n, time.perf_counter() - t0,
                      fval, cfg.fstar, f_start=f_start)
        if _check_divergence(fval, f0):
            record.diverged = True
            break
    done = len(record.epochs)
    if done and not record.diverged:
        record.x_final = final_output_select(xs, snap_sum / done, obj)
    else:
        record.x_final = np.array(xs)
    return record


def run_vr_sgd(cfg, obj):
    """Anchored epochs, average-then-last snapshots, decaying step sizes."""
    return _run_anchored(obj, cfg, "vr_sgd")


def run_svrg(cfg, obj):
    """Classic last-iterate anchored solver (snapshot and restart at x_m)."""
    cfg = replace(cfg, snapshot="last", lr_mode="fixed")
    return _run_anchored(obj, cfg, "svrg")


def run_prox_svrg(cfg, obj):
    """Anchored solver restarting each epoch from the iterate average."""
    cfg = replace(cfg, snapshot="average", lr_mode="fixed", update_rule="prox")
    return _run_anchored(obj, cfg, "prox_svrg")


def run_vr_sgd_pp(cfg, obj):
    """Growing-epoch variant: m_1 = n//4 by default, factor rho, capped at m."""
    m, _, _ = _resolve(cfg, obj)
    m1 = cfg.m1 if cfg.m1 is not None else max(1, obj.n // 4)
    lengths = epoch_lengths(m1, cfg.rho, m, cfg.epochs)
    return _run_anchored(obj, cfg, "vr_sgd_pp", lengths=lengths)


def run_momentum_vr_sgd(cfg, obj):
    """Coupled-sequence variant: v tracks the step, x is pulled toward it.

    Option I re-couples v to x at each epoch start (recovering the plain
    solver's trajectory exactly when the same step sizes are used); Option II
    carries v across epochs and resets x instead.
    """
    if not obj.g_is_smooth:
        raise ValueError("the momentum variant needs a differentiable "
                         "regularizer")
    m, eta0, x0 = _resolve(cfg, obj)
    option = cfg.momentum_option
    rng = make_rng(cfg.seed)
    scheme = uniform_scheme()
    record = RunRecord(algorithm="momentum_vr_sgd", seed=cfg.seed)
    if cfg.record_iterates:
        record.iterates = []
    lam1_g = obj.lam1_in_g
    xs = x0.copy()
    x = x0.copy()
    v = x0.copy()
    snap_sum = np.zeros(obj.d)
    f0 = objective_value(obj, x0)
    t0 = time.perf_counter()
    for s in range(1, cfg.epochs + 1):
        w = max(cfg.alpha, 2.0 / (s + 1.0))
        eta = _epoch_eta(cfg, eta0, s)
        state = EstimatorState(obj, xs)
        f_start = objective_value(obj, x)
        if option == "I":
            v = xs + (x - xs) / w
        else:
            x = w * v + (1.0 - w) * xs
        acc = np.zeros(obj.d)
        for _ in range(m):
            i = sample_index(rng, scheme, obj.n)
            g = svrg_estimate(state, obj, i, x)
            if lam1_g:
                g += lam1_g * x
            v = v - eta * g
            x = xs + w * (v - xs)
            acc += x
            if record.iterates is not None:
                record.iterates.append(x.copy())
        record.coord_updates += m * obj.d
        xs = acc / m
        snap_sum += xs
        fval = objective_value(obj, xs)
        record.append(s, s + s * m / obj.n, time.perf_counter() - t0,
                      fval, cfg.fstar, f_start=f_start)
        if _check_divergence(fval, f0):
            record.diverged = True
            break
    done = len(record.epochs)
    if done and not record.diverged:
        record.x_final = final_output_select(xs, snap_sum / done, obj)
    else:
        record.x_final = np.array(xs)
    return record


def run_saga(cfg, obj):
    """Table-based estimator: one stored link derivative per component.

    `epochs` counts data passes of inner steps; the table initialization at
    x0 costs one extra pass, so the trace reports passes 1 + t.
    """
    _, eta0, x0 = _resolve(cfg, obj)
    eta = eta0
    rng = make_rng(cfg.seed)
    scheme = uniform_scheme()
    record = RunRecord(algorithm="saga", seed=cfg.seed)
    if cfg.record_iterates:
        record.iterates = []
    state = SagaState(obj, x0)
    spec = ProxSpec(obj.reg, eta)
    x = x0.copy()
    f0 = objective_value(obj, x0)
    n = obj.n
    t0 = time.perf_counter()
    for t in range(1, cfg.epochs + 1):
        for _ in range(n):
            i = sample_index(rng, scheme, obj.n)
            g = saga_estimate_and_update(state, obj, i, x)
            x = prox_apply(spec, x - eta * g)
            if record.iterates is not None:
                record.iterates.append(x.copy())
        record.coord_updates += n * obj.d
        fval = objective_value(obj, x)
        record.append(t, 1.0 + t, time.perf_counter() - t0, fval, cfg.fstar)
        if _check_divergence(fval, f0):
            record.diverged = True
            break
    record.x_final = np.array(x)
    return record


def run_katyusha(cfg, obj, variant=None):
    """Three-point accelerated anchored solver.

    Variant II applies the regularizer through proximal maps on both the y
    and z sequences; variant I uses explicit gradient steps (smooth g only).
    With mu > 0 the coupling weight w1 = min(sqrt(m*mu/(3L)), 1/2) is fixed;
    otherwise w1 decays as min(2/(s+1), 1/2) per epoch. cfg.w1 overrides.
    """
    from .model import smoothness_constant

    if variant is None:
        variant = cfg.variant
    if variant not in ("I", "II"):
        raise ValueError("variant must be 'I' or 'II'")
    if variant == "I" and not obj.g_is_smooth:
        raise ValueError("variant I needs a differentiable regularizer")
    m, _, x0 = _resolve(cfg, obj)
    L = smoothness_constant(obj)
    mu = obj.mu
    w2 = 0.5
    rng = make_rng(cfg.seed)
    scheme = uniform_scheme()
    record = RunRecord(algorithm="katyusha", seed=cfg.seed)
    if cfg.record_iterates:
        record.iterates = []
    xs = x0.copy()
    y = x0.copy()
    z = x0.copy()
    f0 = objective_value(obj, x0)
    lam1_g = obj.lam1_in_g
    t0 = time.perf_counter()
    for s in range(1, cfg.epochs + 1):
        if cfg.w1 is not None:
            w1 = cfg.w1
        elif mu > 0.0:
            w1 = min(math.sqrt(m * mu / (3.0 * L)), 0.5)
        else:
            w1 = min(2.0 / (s + 1.0), 0.5)
        eta = 1.0 / (3.0 * w1 * L)
        state = EstimatorState(obj, xs)
        f_start = objective_value(obj, xs)
        spec_y = ProxSpec(obj.reg, eta)
        spec_z = ProxSpec(obj.reg, 1.0 / (3.0 * L))
        acc = np.zeros(obj.d)
        for _ in range(m):
            i = sample_index(rng, scheme, obj.n)
            xk = w1 * y + w2 * xs + (1.0 - w1 - w2) * z
            g = svrg_estimate(state, obj, i, xk)
            if variant == "II":
                y = prox_apply(spec_y, y - eta * g)
                z = prox_apply(spec_z, xk - g / (3.0 * L))
            else:
                if lam1_g:
                    g += lam1_g * xk
                y = y - eta * g
                z = xk - g / (3.0 * L)
            acc += xk
            if record.iterates is not None:
                record.iterates.append(xk.copy())
        record.coord_updates += m * obj.d
        xs = acc / m
        fval = objective_value(obj, xs)
        record.append(s, s + s * m / obj.n, time.perf_counter() - t0,
                      fval, cfg.fstar, f_start=f_start)
        if _check_divergence(fval, f0):
            record.diverged = True
            break
    record.x_final = np.array(xs)
    return record


def run_deterministic(cfg, obj, method=None):
    """Full-gradient baselines (gd, agd, apg) and decaying-step sgd.

    Each trace row of gd/agd/apg is one full-gradient iteration (one pass);
    sgd traces every n single-sample steps with eta_k = eta0 / sqrt(k).
    """
    method = (method or cfg.method or "gd").lower()
    if method not in ("gd", "agd", "apg", "sgd"):
        raise ValueError(f"unknown deterministic method {method!r}")
    from .model import smoothness_constant

    _, eta0, x0 = _resolve(cfg, obj)
    L = smoothness_constant(obj)
    record = RunRecord(algorithm=method, seed=cfg.seed)
    if cfg.record_iterates:
        record.iterates = []
    x = x0.copy()
    f0 = objective_value(obj, x0)
    n = obj.n
    t0 = time.perf_counter()
    if method == "sgd":
        rng = make_rng(cfg.seed)
        scheme = uniform_scheme()
        lam1_g = obj.lam1_in_g
        use_prox = not obj.g_is_smooth or cfg.update_rule == "prox"
        k = 0
        for t in range(1, cfg.epochs + 1):
            for _ in range(n):
                k += 1
                eta = eta0 / math.sqrt(k)
                i = sample_index(rng, scheme, obj.n)
                g = component_gradient(obj, i, x)
                if use_prox:
                    x = prox_apply(ProxSpec(obj.reg, eta), x - eta * g)
                else:
                    if lam1_g:
                        g += lam1_g * x
                    x = x - eta * g
                if record.iterates is not None:
                    record.iterates.append(x.copy())
            fval = objective_value(obj, x)
            record.append(t, float(t), time.perf_counter() - t0, fval,
                          cfg.fstar)
            if _check_divergence(fval, f0):
                record.diverged = True
                break
        record.x_final = np.array(x)
        return record

    if method == "agd" and obj.mu <= 0.0:
        raise ValueError("agd needs a strongly convex objective (lam1 > 0)")
    use_prox = (method == "apg" or not obj.g_is_smooth
                or (method == "gd" and cfg.update_rule == "prox"))
    if method == "agd" and not obj.g_is_smooth:
        raise ValueError("agd needs a differentiable regularizer")
    x_prev = x.copy()
    yk = x.copy()
    alpha_k = 1.0
    w_agd = 0.0
    if method == "agd":
        w_agd = ((math.sqrt(L) - math.sqrt(obj.mu))
                 / (math.sqrt(L) + math.sqrt(obj.mu)))
    for t in range(1, cfg.epochs + 1):
        if method == "gd":
            if use_prox:
                g = full_gradient(obj, x)
                x = prox_apply(ProxSpec(obj.reg, eta0), x - eta0 * g)
            else:
                g = full_gradient(obj, x) + obj.g_grad(x)
                x = x - eta0 * g
        elif method == "agd":
            g = full_gradient(obj, yk) + obj.g_grad(yk)
            x_new = yk - eta0 * g
            yk = x_new + w_agd * (x_new - x)
            x = x_new
        else:  # apg
            g = full_gradient(obj, yk)
            x_new = prox_apply(ProxSpec(obj.reg, eta0), yk - eta0 * g)
            alpha_next = (1.0 + math.sqrt(1.0 + 4.0 * alpha_k ** 2)) / 2.0
            yk = x_new + ((alpha_k - 1.0) / alpha_next) * (x_new - x)
            alpha_k = alpha_next
            x = x_new
        if record.iterates is not None:
            record.iterates.append(x.copy())
        fval = objective_value(obj, x)
        record.append(t, float(t), time.perf_counter() - t0, fval, cfg.fstar)
        if _check_divergence(fval, f0):
            record.diverged = True
            break
    record.x_final = np.array(x)
    return record


def run_eigen(cfg, ds, method=None):
    """Leading-eigenvector solvers on the unit sphere.

    Minimizes -x'Cx over ||x|| = 1 with C = A'A/n. `power` is the classic
    normalized iteration (one pass per trace row); `vr_pca` and `vr_sgd` run
    anchored stochastic epochs with renormalization after every inner step,
    differing in the snapshot (last iterate vs normalized epoch average).
    The trace reports the relative error (lambda_max - x'Cx) / lambda_max.
    """
    method = (method or cfg.method or "vr_sgd").lower()
    if method not in ("power", "vr_pca", "vr_sgd"):
        raise ValueError(f"unknown eigen method {method!r}")
    lam_max, _ = eigen_oracle(ds)
    if lam_max <= 1e-15:
        raise ValueError("degenerate data: the covariance has no positive "
                         "eigenvalue")
    obj = make_objective(ds, "eigen-quadratic")
    n = ds.n
    m = cfg.m if cfg.m is not None else n
    if cfg.eta0 is not None:
        eta = cfg.eta0
    else:
        trace_c = float(np.sum(ds.row_norms**2)) / n
        eta = 1.0 / (math.sqrt(n) * trace_c)
    rng = make_rng(cfg.seed)
    scheme = uniform_scheme()
    if cfg.x0 is not None:
        x = np.array(cfg.x0, dtype=np.float64)
    else:
        x = rng.standard_normal(ds.d)
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        raise ValueError("x0 must be nonzero")
    x = x / nx
    record = RunRecord(algorithm=f"eigen_{method}", seed=cfg.seed)
    t0 = time.perf_counter()
    if method == "power":
        for t in range(1, cfg.epochs + 1):
            y = ds.rmatvec(ds.matvec(x)) / n
            ny = float(np.linalg.norm(y))
            if ny == 0.0:
                raise ValueError("power iteration hit the null space")
            x = y / ny
            fval = -float(np.dot(x, ds.rmatvec(ds.matvec(x)))) / n
            record.append(t, float(t), time.perf_counter() - t0, fval,
                          -lam_max)
        record.x_final = x
        record.gap = [g / lam_max for g in record.gap]
        return record
    xs = x.copy()
    for s in range(1, cfg.epochs + 1):
        state = EstimatorState(obj, xs)
        acc = np.zeros(ds.d)
        for _ in range(m):
            i = sample_index(rng, scheme, obj.n)
            g = svrg_estimate(state, obj, i, x)
            x = x - eta * g
            x /= float(np.linalg.norm(x))
            acc += x
        if method == "vr_pca":
            xs = x.copy()
        else:
            avg = acc / m
            na = float(np.linalg.norm(avg))
            xs = avg / na if na > 0.0 else x.copy()
            x = x.copy()
        fval = objective_value(obj, xs)
        record.append(s, s + s * m / n, time.perf_counter() - t0, fval,
                      -lam_max)
    record.x_final = xs
    record.gap = [g / lam_max for g in record.gap]
    return record


_RUNNERS = {
    "vr_sgd": run_vr_sgd,
    "svrg": run_svrg,
    "prox_svrg": run_prox_svrg,
    "vr_sgd_pp": run_vr_sgd_pp,
    "momentum_vr_sgd": run_momentum_vr_sgd,
    "saga": run_saga,
    "katyusha": run_katyusha,
    "gd": run_deterministic,
    "agd": run_deterministic,
    "apg": run_deterministic,
    "sgd": run_deterministic,
    "eigen": run_eigen,
}


def run_solver(cfg, obj):
    """Dispatch on cfg.algorithm. Eigen runs take the dataset from obj."""
    name = cfg.algorithm
    if name not in _RUNNERS:
        raise ValueError(f"unknown algorithm {name!r}")
    if name in ("gd", "agd", "apg", "sgd"):
        return run_deterministic(cfg, obj, method=name)
    if name == "eigen":
        return run_eigen(cfg, obj.data, method=cfg.method)
    return _RUNNERS[name](cfg, obj)
