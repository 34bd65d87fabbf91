"""Show why the restart point matters: step-size robustness of the gap curve.

Classic SVRG restarts each epoch at the last snapshot and its analysis only
covers small steps (eta < ~1/(4L)); push eta toward 1/L and the gap curve
starts bouncing. Restarting from the averaged snapshot's successor keeps the
descent monotone across the whole grid. We sweep eta over [0.2/L, 1.2/L] on a
ridge problem whose exact optimum is known in closed form, and count how many
epochs made the gap worse.

Run:  python demos/step_size_robustness.py
"""

import numpy as np

from vrsgd import (
    SolverConfig,
    gen_synthetic,
    l2_reg,
    make_objective,
    normalize_rows,
    objective_value,
    ridge_closed_form,
    run_solver,
)

# ---------------------------------------------------------------------------
# Ridge regression with a closed-form optimum: gaps are exact, not estimated.
ds = normalize_rows(gen_synthetic("ridge", 200, 10, seed=42))
obj = make_objective(ds, "squared", l2_reg(1e-2))
fstar = objective_value(obj, ridge_closed_form(ds, 1e-2))

def increases(gaps):
    """Count epochs that made the gap meaningfully worse (1e-12 relative)."""
    return sum(1 for a, b in zip(gaps, gaps[1:])
               if b > a + 1e-12 * max(1.0, abs(a)))

# Unit-norm rows make L = 1 for the squared loss, so eta below IS eta*L.
etas = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2]
print(f"{'eta*L':>6} | {'vr-sgd final gap':>18} {'bad epochs':>11} | "
      f"{'svrg final gap':>18} {'bad epochs':>11}")
for eta in etas:
    row = [f"{eta:>6.1f}"]
    for algo in ("vr_sgd", "svrg"):
        cfg = SolverConfig(algorithm=algo, epochs=30, m=400, eta0=eta,
                           lr_mode="fixed", update_rule="smooth",
                           fstar=fstar, seed=0)
        rec = run_solver(cfg, obj)
        gap = float("inf") if rec.diverged else rec.gap[-1]
        row.append(f"{gap:>18.3e} {increases(rec.gap):>11d}")
    print(" | ".join(row))

print("""
Reading the table: the averaged-snapshot method keeps a monotone, geometric
gap decrease at every step size, while the last-snapshot baseline goes
non-monotone (and eventually useless) as eta*L approaches 1. That is the
practical payoff of decoupling the snapshot from the restart point.""")
