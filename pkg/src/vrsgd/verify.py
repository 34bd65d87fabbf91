"""Fast built-in self checks for `vrsgd-bench verify`.

Each check exercises one load-bearing identity of the library on a tiny
instance and must finish in well under a second. A fresh install should
print PASS for every line and exit 0.
"""

import numpy as np

from .data import gen_synthetic, make_rng, normalize_rows
from .diagnostics import (
    eigen_oracle,
    finite_diff_grad,
    prox_grid_oracle,
    ridge_closed_form,
    theoretical_rate_sc,
    variance_bound_report,
)
from .estimator import EstimatorState, full_gradient, svrg_estimate
from .model import (
    LOSS_KINDS,
    component_value,
    l1_reg,
    l2_reg,
    loss_family,
    make_objective,
    objective_value,
    smoothness_constant,
)
from .prox import ProxSpec, prox_apply, prox_optimality_residual
from .solvers import (
    SolverConfig,
    epoch_lengths,
    learning_rate,
    run_momentum_vr_sgd,
    run_vr_sgd,
    snapshot_update,
)

__all__ = ["run_verify", "CHECKS"]


def _check_loss_gradients():
    rng = make_rng(11)
    for kind in LOSS_KINDS:
        fam = loss_family(kind)
        label = -1.0 if fam.pm1_labels else 0.7
        for _ in range(10):
            z = float(rng.uniform(-3, 3))
            got = fam.deriv(z, label)
            num = (fam.value(z + 1e-6, label) - fam.value(z - 1e-6, label)) \
                / 2e-6
            assert abs(got - num) <= 1e-5, f"{kind}: {got} vs {num}"


def _check_prox():
    rng = make_rng(12)
    for reg in (l2_reg(0.3), l1_reg(0.2)):
        spec = ProxSpec(reg, 0.5)
        y = rng.uniform(-1.5, 1.5, size=4)
        x = prox_apply(spec, y)
        for j in range(len(y)):
            grid = prox_grid_oracle(spec, float(y[j]))
            assert abs(x[j] - grid) <= 1e-4
        assert prox_optimality_residual(spec, y, x) <= 1e-10


def _check_estimator_identity():
    ds = normalize_rows(gen_synthetic("ridge", 40, 6, seed=3))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    rng = make_rng(4)
    x = rng.standard_normal(6)
    state = EstimatorState(obj, rng.standard_normal(6))
    mean = np.zeros(6)
    for i in range(obj.n):
        mean += svrg_estimate(state, obj, i, x)
    mean /= obj.n
    full = full_gradient(obj, x)
    assert np.linalg.norm(mean - full) <= 1e-12 * max(
        1.0, np.linalg.norm(full))


def _check_variance_bound():
    ds = normalize_rows(gen_synthetic("ridge", 10, 3, seed=5))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    xstar = ridge_closed_form(ds, 1e-2)
    rng = make_rng(6)
    for b in (1, 3, 10):
        rep = variance_bound_report(obj, rng.standard_normal(3),
                                    rng.standard_normal(3), xstar, b=b)
        assert rep.satisfied, f"variance bound violated at b={b}"


def _check_schedule():
    assert learning_rate(1, 0.1, 0.2) == 0.1
    assert abs(learning_rate(9, 0.1, 0.2) - 0.5) < 1e-15
    assert abs(learning_rate(1000, 0.1, 0.2) - 0.5) < 1e-15


def _check_epoch_lengths():
    got = epoch_lengths(100, 1.75, 2000, 8)
    assert got == [100, 175, 306, 535, 936, 1638, 2000, 2000], got
    doubling = epoch_lengths(100, 2.0, 1600, 6)
    assert doubling == [100, 200, 400, 800, 1600, 1600], doubling


def _check_snapshot_rules():
    snap, start = snapshot_update("average-last", [0.0, 2.0])
    assert snap == 1.0 and start == 2.0
    snap, start = snapshot_update("average-excl-last", [0.0, 0.0, 3.0])
    assert snap == 0.0 and start == 3.0


def _check_seed_free_batch():
    ds = normalize_rows(gen_synthetic("ridge", 12, 4, seed=7))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    base = dict(epochs=3, m=6, eta0=0.1, lr_mode="fixed", batch=12,
                update_rule="prox")
    run_a = run_vr_sgd(SolverConfig(seed=1, **base), obj)
    run_b = run_vr_sgd(SolverConfig(seed=2, **base), obj)
    assert run_a.objective == run_b.objective


def _check_lazy_matches_dense():
    ds = gen_synthetic("logistic", 30, 200, seed=8, density=0.05)
    obj = make_objective(ds, "logistic", l2_reg(1e-3))
    base = dict(epochs=3, eta0=0.5, lr_mode="fixed", seed=0,
                update_rule="prox")
    lazy = run_vr_sgd(SolverConfig(lazy="on", **base), obj)
    dense = run_vr_sgd(SolverConfig(lazy="off", **base), obj)
    err = np.linalg.norm(lazy.x_final - dense.x_final)
    scale = max(1.0, np.linalg.norm(dense.x_final))
    assert err <= 1e-9 * scale, f"lazy/dense deviation {err}"


def _check_rate_value():
    report = theoretical_rate_sc(1.0, 0.1, 0.1, 2000, 1.0, option="II")
    assert abs(report.rho - 0.350318016150933) <= 1e-12
    assert report.convergent


def _check_momentum_equivalence():
    ds = normalize_rows(gen_synthetic("logistic", 20, 5, seed=9))
    obj = make_objective(ds, "logistic", l2_reg(1e-2))
    base = dict(epochs=3, m=12, eta0=0.4, alpha=0.2, seed=5,
                record_iterates=True)
    mom = run_momentum_vr_sgd(
        SolverConfig(momentum_option="I", lr_mode="varying",
                     update_rule="smooth", **base), obj)
    plain = run_vr_sgd(
        SolverConfig(snapshot="average-last", lr_mode="fixed",
                     update_rule="smooth", lazy="off", **base), obj)
    for a, b in zip(mom.iterates, plain.iterates):
        err = np.linalg.norm(a - b)
        assert err <= 1e-9 * max(1.0, np.linalg.norm(b))


def _check_ridge_convergence():
    ds = normalize_rows(gen_synthetic("ridge", 60, 5, seed=10))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    fstar = objective_value(obj, ridge_closed_form(ds, 1e-2))
    eta = 1.0 / (4.0 * smoothness_constant(obj))
    cfg = SolverConfig(epochs=40, eta0=eta, lr_mode="fixed",
                       update_rule="smooth", fstar=fstar, seed=0)
    rec = run_vr_sgd(cfg, obj)
    assert rec.gap[-1] <= 1e-8, f"final gap {rec.gap[-1]}"


def _check_eigen_oracle():
    ds = gen_synthetic("ridge", 25, 4, seed=13)
    lam, vec = eigen_oracle(ds)
    cov = ds.to_dense().T @ ds.to_dense() / ds.n
    assert np.linalg.norm(cov @ vec - lam * vec) <= 1e-10


def _check_component_values():
    ds = normalize_rows(gen_synthetic("logistic", 15, 4, seed=14))
    obj = make_objective(ds, "logistic", l2_reg(1e-2))
    x = make_rng(15).standard_normal(4)
    mean = sum(component_value(obj, i, x) for i in range(obj.n)) / obj.n
    total = objective_value(obj, x) - obj.reg.value(x)
    assert abs(mean - total) <= 1e-12 * max(1.0, abs(total))


CHECKS = [
    ("loss gradients match central differences", _check_loss_gradients),
    ("prox operators match the grid oracle", _check_prox),
    ("estimator averages to the full gradient", _check_estimator_identity),
    ("estimator variance bound holds", _check_variance_bound),
    ("learning-rate schedule values", _check_schedule),
    ("growing epoch lengths", _check_epoch_lengths),
    ("snapshot update rules", _check_snapshot_rules),
    ("full-batch runs are seed independent", _check_seed_free_batch),
    ("lazy sparse path matches dense path", _check_lazy_matches_dense),
    ("geometric rate calculator value", _check_rate_value),
    ("momentum option I matches the plain solver", _check_momentum_equivalence),
    ("ridge run converges to the closed form", _check_ridge_convergence),
    ("dense eigendecomposition oracle", _check_eigen_oracle),
    ("component values average to the smooth part", _check_component_values),
]


def run_verify():
    """Run every check; print one PASS/FAIL line each; exit code 0 iff all pass."""
    failures = 0
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:  # report and keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"PASS {name}")
    total = len(CHECKS)
    print(f"{total - failures}/{total} checks passed")
    return 0 if failures == 0 else 1
