"""Solver mechanics: schedules, snapshots, runners, and degenerate limits."""

import math

import numpy as np
import pytest

from vrsgd import (
    Dataset,
    ProxSpec,
    SolverConfig,
    epoch_lengths,
    final_output_select,
    full_gradient,
    gen_synthetic,
    l1_reg,
    l2_reg,
    learning_rate,
    make_objective,
    make_rng,
    normalize_rows,
    objective_value,
    passes_to_tolerance,
    prox_apply,
    ridge_closed_form,
    run_deterministic,
    run_katyusha,
    run_momentum_vr_sgd,
    run_prox_svrg,
    run_saga,
    run_solver,
    run_svrg,
    run_vr_sgd,
    run_vr_sgd_pp,
    smoothness_constant,
    snapshot_update,
    theoretical_rate_sc,
)


# -- schedules and epoch bookkeeping ----------------------------------------

def test_learning_rate_schedule():
    eta0, alpha = 0.6, 0.2
    # denominators max(alpha, 2/(s+1)): 1, 2/3, 1/2, ..., then flat at alpha
    assert learning_rate(1, eta0, alpha) == pytest.approx(0.6)
    assert learning_rate(2, eta0, alpha) == pytest.approx(0.9)
    assert learning_rate(3, eta0, alpha) == pytest.approx(1.2)
    assert learning_rate(9, eta0, alpha) == pytest.approx(3.0)
    assert learning_rate(50, eta0, alpha) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        learning_rate(0, eta0, alpha)
    with pytest.raises(ValueError):
        learning_rate(1, eta0, 0.0)
    with pytest.raises(ValueError):
        learning_rate(1, 0.0, alpha)


def test_snapshot_update_options():
    its = [np.array([1.0, 1.0]), np.array([2.0, 2.0]), np.array([6.0, 6.0])]
    snap, start = snapshot_update("last", its)
    np.testing.assert_array_equal(snap, [6, 6])
    np.testing.assert_array_equal(start, [6, 6])
    snap, start = snapshot_update("average", its)
    np.testing.assert_allclose(snap, [3, 3])
    np.testing.assert_allclose(start, [3, 3])
    snap, start = snapshot_update("average-last", its)
    np.testing.assert_allclose(snap, [3, 3])
    np.testing.assert_array_equal(start, [6, 6])
    snap, start = snapshot_update("average-excl-last", its)
    np.testing.assert_allclose(snap, [1.5, 1.5])
    np.testing.assert_array_equal(start, [6, 6])
    # roman aliases
    for alias, name in (("I", "last"), ("II", "average"),
                        ("III", "average-last")):
        a = snapshot_update(alias, its)
        b = snapshot_update(name, its)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])
    with pytest.raises(ValueError):
        snapshot_update("median", its)
    with pytest.raises(ValueError):
        snapshot_update("last", [])
    with pytest.raises(ValueError):
        snapshot_update("average-excl-last", its[:1])


def test_final_output_select_prefers_snapshot_on_ties():
    ds = Dataset.from_dense(np.array([[1.0, 0.0]]), np.array([0.0]))
    obj = make_objective(ds, "squared")
    better = final_output_select(np.array([0.0, 5.0]), np.array([2.0, 0.0]),
                                 obj)
    np.testing.assert_array_equal(better, [0.0, 5.0])  # F=0 beats F=2
    worse = final_output_select(np.array([3.0, 0.0]), np.array([1.0, 0.0]),
                                obj)
    np.testing.assert_array_equal(worse, [1.0, 0.0])
    tie = final_output_select(np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
                              obj)
    np.testing.assert_array_equal(tie, [1.0, 0.0])  # equal F: keep snapshot


def test_epoch_lengths_growth_and_cap():
    assert epoch_lengths(100, 1.75, 2000, 8) == \
        [100, 175, 306, 535, 936, 1638, 2000, 2000]
    assert epoch_lengths(50, 2.0, 500, 6) == [50, 100, 200, 400, 500, 500]
    assert epoch_lengths(10, 3.0, 25, 4) == [10, 25, 25, 25]
    with pytest.raises(ValueError):
        epoch_lengths(0, 2.0, 100, 3)
    with pytest.raises(ValueError):
        epoch_lengths(10, 1.0, 100, 3)


def test_solver_config_validation():
    for kwargs in (dict(epochs=0), dict(m=0), dict(lr_mode="warmup"),
                   dict(update_rule="mirror"), dict(batch=0),
                   dict(lazy="maybe"), dict(momentum_option="III"),
                   dict(snapshot="median")):
        with pytest.raises(ValueError):
            SolverConfig(**kwargs)


def test_pass_accounting_is_anchored(ridge_instance):
    obj, _, _ = ridge_instance
    rec = run_vr_sgd(SolverConfig(epochs=1), obj)
    assert rec.passes == [3.0]  # one anchor pass + m=2n inner steps
    rec2 = run_vr_sgd(SolverConfig(epochs=2, m=obj.n), obj)
    assert rec2.passes == [2.0, 4.0]


def test_eta_default_is_quarter_inverse_smoothness(ridge_instance):
    obj, _, _ = ridge_instance
    eta = 1.0 / (4.0 * smoothness_constant(obj))
    a = run_vr_sgd(SolverConfig(epochs=2, seed=5), obj)
    b = run_vr_sgd(SolverConfig(epochs=2, seed=5, eta0=eta), obj)
    assert a.objective == b.objective


# -- inner-loop mechanics -----------------------------------------------------

def test_zero_data_reduces_to_pure_l2_contraction():
    # with a_i = 0 every estimate vanishes, so the smooth rule contracts
    # x by (1 - eta*lam1) per inner step
    ds = Dataset.from_dense(np.zeros((4, 3)), np.array([1.0, -1.0, 1.0, 1.0]))
    obj = make_objective(ds, "squared", l2_reg(0.5))
    cfg = SolverConfig(epochs=3, m=5, eta0=0.1, lr_mode="fixed",
                       snapshot="last", update_rule="smooth",
                       x0=np.ones(3))
    rec = run_vr_sgd(cfg, obj)
    want = (1.0 - 0.1 * 0.5) ** 15 * np.ones(3)
    np.testing.assert_allclose(rec.x_final, want, rtol=1e-12)
    assert all(a > b for a, b in zip(rec.objective, rec.objective[1:]))


def test_divergence_guard_trips_and_flags():
    ds = normalize_rows(gen_synthetic("ridge", 20, 5, seed=34))
    obj = make_objective(ds, "squared")
    cfg = SolverConfig(epochs=5, eta0=10.0, lr_mode="fixed",
                       update_rule="smooth", seed=0)
    rec = run_vr_sgd(cfg, obj)
    assert rec.diverged
    assert len(rec.objective) < 5  # loop stopped early


def test_full_batch_inner_steps_equal_gradient_descent():
    ds = normalize_rows(gen_synthetic("ridge", 20, 5, seed=35))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    cfg = SolverConfig(epochs=2, m=3, batch=20, eta0=0.4, lr_mode="fixed",
                       snapshot="last", update_rule="smooth",
                       record_iterates=True)
    rec = run_vr_sgd(cfg, obj)
    gd = run_deterministic(
        SolverConfig(epochs=6, eta0=0.4, update_rule="smooth",
                     record_iterates=True), obj, method="gd")
    assert len(rec.iterates) == len(gd.iterates) == 6
    for a, b in zip(rec.iterates, gd.iterates):
        assert np.linalg.norm(a - b) <= 1e-12 * max(1.0, np.linalg.norm(b))


def test_snapshot_choice_changes_the_trajectory(ridge_instance):
    obj, _, _ = ridge_instance
    base = dict(epochs=4, eta0=0.2, lr_mode="fixed", seed=7)
    last = run_vr_sgd(SolverConfig(snapshot="last", **base), obj)
    avg = run_vr_sgd(SolverConfig(snapshot="average", **base), obj)
    third = run_vr_sgd(SolverConfig(snapshot="average-last", **base), obj)
    assert last.objective != avg.objective
    assert avg.objective != third.objective


# -- named variants reduce to the shared engine ------------------------------

def test_svrg_is_last_snapshot_fixed_step(ridge_instance):
    obj, _, _ = ridge_instance
    cfg = SolverConfig(epochs=3, seed=2, snapshot="average",
                       lr_mode="varying")
    forced = run_svrg(cfg, obj)
    plain = run_vr_sgd(SolverConfig(epochs=3, seed=2, snapshot="last",
                                    lr_mode="fixed"), obj)
    assert forced.objective == plain.objective
    assert forced.algorithm == "svrg"


def test_prox_svrg_is_average_snapshot_prox_step(ridge_instance):
    obj, _, _ = ridge_instance
    cfg = SolverConfig(epochs=3, seed=2, snapshot="last", lr_mode="varying",
                       update_rule="smooth")
    forced = run_prox_svrg(cfg, obj)
    plain = run_vr_sgd(SolverConfig(epochs=3, seed=2, snapshot="average",
                                    lr_mode="fixed", update_rule="prox"), obj)
    assert forced.objective == plain.objective


def test_vr_sgd_pp_passes_follow_the_growing_schedule():
    ds = normalize_rows(gen_synthetic("ridge", 50, 5, seed=36))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    cfg = SolverConfig(epochs=5, m=100, m1=10, rho=2.0, seed=1)
    rec = run_vr_sgd_pp(cfg, obj)
    lengths = epoch_lengths(10, 2.0, 100, 5)
    assert lengths == [10, 20, 40, 80, 100]
    want = np.cumsum([1.0 + ms / 50.0 for ms in lengths])
    np.testing.assert_allclose(rec.passes, want, rtol=1e-12)


def test_vr_sgd_pp_default_first_epoch_is_quarter_n():
    ds = normalize_rows(gen_synthetic("ridge", 40, 5, seed=37))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    rec = run_vr_sgd_pp(SolverConfig(epochs=1), obj)
    assert rec.passes == [1.0 + 10.0 / 40.0]  # m1 = n // 4


# -- accelerated and table-based variants ------------------------------------

def test_katyusha_converges_strongly_convex():
    ds = normalize_rows(gen_synthetic("ridge", 40, 6, seed=30))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    fstar = objective_value(obj, ridge_closed_form(ds, 1e-2))
    rec = run_katyusha(SolverConfig(epochs=25, seed=1, fstar=fstar), obj)
    assert not rec.diverged
    assert rec.gap[-1] <= 1e-10


def test_katyusha_variants_agree_without_regularizer():
    ds = normalize_rows(gen_synthetic("ridge", 40, 6, seed=30))
    obj = make_objective(ds, "squared")
    cfg = SolverConfig(epochs=6, seed=2, m=40)
    one = run_katyusha(cfg, obj, variant="I")
    two = run_katyusha(cfg, obj, variant="II")
    assert one.objective == two.objective


def test_katyusha_validation():
    ds = normalize_rows(gen_synthetic("ridge", 10, 4, seed=38))
    lasso = make_objective(ds, "squared", l1_reg(1e-2))
    with pytest.raises(ValueError):
        run_katyusha(SolverConfig(epochs=1), lasso, variant="I")
    with pytest.raises(ValueError):
        run_katyusha(SolverConfig(epochs=1), lasso, variant="X")
    run_katyusha(SolverConfig(epochs=1), lasso, variant="II")  # prox path ok


def test_momentum_option_two_converges(logistic_instance):
    obj = logistic_instance
    rec = run_momentum_vr_sgd(
        SolverConfig(epochs=12, momentum_option="II", update_rule="smooth",
                     seed=3), obj)
    assert not rec.diverged
    assert rec.objective[-1] < rec.objective[0]
    grad = full_gradient(obj, rec.x_final) + obj.g_grad(rec.x_final)
    assert np.linalg.norm(grad) <= 1e-3


def test_momentum_needs_smooth_regularizer():
    ds = normalize_rows(gen_synthetic("ridge", 10, 4, seed=39))
    lasso = make_objective(ds, "squared", l1_reg(1e-2))
    with pytest.raises(ValueError):
        run_momentum_vr_sgd(SolverConfig(epochs=1), lasso)


def test_saga_converges_and_counts_table_pass(ridge_instance):
    obj, _, fstar = ridge_instance
    rec = run_saga(SolverConfig(epochs=30, seed=4, fstar=fstar), obj)
    assert rec.passes == [1.0 + t for t in range(1, 31)]
    assert rec.gap[-1] <= 1e-8
    folded = make_objective(obj.data, "squared", l2_reg(1e-2), fold_l2=True)
    with pytest.raises(ValueError):
        run_saga(SolverConfig(epochs=1), folded)


# -- deterministic baselines --------------------------------------------------

def test_gd_step_formulas():
    ds = Dataset.from_dense(np.array([[0.6, -0.8]]), np.array([1.0]))
    obj = make_objective(ds, "logistic", l2_reg(0.1))
    smooth = run_deterministic(
        SolverConfig(epochs=1, eta0=0.3, update_rule="smooth",
                     record_iterates=True), obj, method="gd")
    g = full_gradient(obj, np.zeros(2)) + 0.1 * np.zeros(2)
    np.testing.assert_allclose(smooth.iterates[0], -0.3 * g, rtol=1e-14)
    proxed = run_deterministic(
        SolverConfig(epochs=1, eta0=0.3, update_rule="prox",
                     record_iterates=True), obj, method="gd")
    want = prox_apply(ProxSpec(obj.reg, 0.3),
                      -0.3 * full_gradient(obj, np.zeros(2)))
    np.testing.assert_allclose(proxed.iterates[0], want, rtol=1e-14)


def test_agd_beats_gd_on_conditioned_ridge():
    ds = normalize_rows(gen_synthetic("ridge", 40, 6, seed=30))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    fstar = objective_value(obj, ridge_closed_form(ds, 1e-2))
    eta = 1.0 / (4.0 * smoothness_constant(obj))
    kwargs = dict(epochs=400, eta0=eta, fstar=fstar, update_rule="smooth")
    gd = run_deterministic(SolverConfig(**kwargs), obj, method="gd")
    agd = run_deterministic(SolverConfig(**kwargs), obj, method="agd")
    p_gd = passes_to_tolerance(gd, 1e-9)
    p_agd = passes_to_tolerance(agd, 1e-9)
    assert p_gd is not None and p_agd is not None
    assert p_agd < p_gd


def test_agd_validation():
    ds = normalize_rows(gen_synthetic("ridge", 10, 4, seed=40))
    with pytest.raises(ValueError):  # needs strong convexity
        run_deterministic(SolverConfig(epochs=1),
                          make_objective(ds, "squared"), method="agd")
    with pytest.raises(ValueError):  # needs a differentiable regularizer
        run_deterministic(SolverConfig(epochs=1),
                          make_objective(ds, "squared", l1_reg(0.1)),
                          method="agd")


def test_apg_solves_lasso_to_fixed_point():
    ds = normalize_rows(gen_synthetic("ridge", 40, 6, seed=30))
    obj = make_objective(ds, "squared", l1_reg(5e-3))
    rec = run_deterministic(SolverConfig(epochs=300, eta0=1.0), obj,
                            method="apg")
    assert rec.objective[-1] < rec.objective[0]
    x = rec.x_final
    spec = ProxSpec(obj.reg, 1.0)
    fixed_point = prox_apply(spec, x - full_gradient(obj, x))
    assert np.linalg.norm(fixed_point - x) <= 1e-8


def test_sgd_decaying_step_trace():
    ds = normalize_rows(gen_synthetic("ridge", 40, 6, seed=30))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    fstar = objective_value(obj, ridge_closed_form(ds, 1e-2))
    rec = run_deterministic(
        SolverConfig(epochs=8, eta0=0.5, seed=3, fstar=fstar,
                     update_rule="smooth"), obj, method="sgd")
    assert rec.passes == [float(t) for t in range(1, 9)]
    assert rec.gap[-1] < rec.gap[0] / 5.0


def test_unknown_deterministic_method():
    ds = gen_synthetic("ridge", 5, 3, seed=41)
    with pytest.raises(ValueError):
        run_deterministic(SolverConfig(epochs=1),
                          make_objective(ds, "squared"), method="newton")


# -- dispatch -----------------------------------------------------------------

def test_run_solver_dispatch(ridge_instance):
    obj, _, _ = ridge_instance
    rec = run_solver(SolverConfig(algorithm="gd", epochs=2,
                                  update_rule="smooth"), obj)
    assert rec.algorithm == "gd"
    rec = run_solver(SolverConfig(algorithm="saga", epochs=2), obj)
    assert rec.algorithm == "saga"
    rec = run_solver(SolverConfig(algorithm="eigen", method="power",
                                  epochs=3), obj)
    assert rec.algorithm == "eigen_power"
    with pytest.raises(ValueError):
        run_solver(SolverConfig(algorithm="annealing", epochs=1), obj)


# -- analytical rate vs. measured contraction ---------------------------------

def test_measured_contraction_respects_rate_bound():
    """With the all-iterates-average restart, the epoch-start gap equals the
    snapshot gap exactly, so the geometric bound applies with c = 1."""
    ds = normalize_rows(gen_synthetic("ridge", 300, 10, seed=33))
    obj = make_objective(ds, "squared", l2_reg(0.1))
    fstar = objective_value(obj, ridge_closed_form(ds, 0.1))
    cfg = SolverConfig(epochs=10, m=1200, eta0=0.1, lr_mode="fixed",
                       update_rule="smooth", snapshot="average", seed=0,
                       fstar=fstar)
    rec = run_vr_sgd(cfg, obj)
    gaps = np.array(rec.gap)
    f_start = np.array(rec.f_start)
    usable = gaps[:-1] > 1e-13
    assert usable.sum() >= 4
    np.testing.assert_allclose((f_start[1:][usable] - fstar)
                               / gaps[:-1][usable], 1.0, rtol=1e-9)
    rho = theoretical_rate_sc(1.0, 0.1, 0.1, 1200, 1.0, option="I").rho
    assert rho < 1.0
    ratios = gaps[1:][usable] / gaps[:-1][usable]
    assert np.max(ratios) <= rho + 0.05
