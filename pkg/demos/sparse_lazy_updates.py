"""Just-in-time updates on sparse data: same iterates, 0.5% of the work.

Each stochastic step on sparse data only *reads* a handful of coordinates,
but the regularizer's shrinkage and the anchor's correction term touch every
coordinate of the iterate. The lazy path records those dense-but-structured
updates symbolically and replays them on a coordinate only when a step
actually needs it, flushing once per epoch. This demo runs the same solve
both ways and compares the final iterates and the coordinate-touch counters.

Run:  python demos/sparse_lazy_updates.py
"""

import time

import numpy as np

from vrsgd import SolverConfig, gen_synthetic, l2_reg, make_objective, run_vr_sgd

# ---------------------------------------------------------------------------
# 400 samples, 5000 features, ~10 nonzeros per row (0.2% density).
ds = gen_synthetic("logistic", 400, 5000, seed=11, density=0.002)
obj = make_objective(ds, "logistic", l2_reg(1e-3))
print(f"data: {ds.n} x {ds.d}, {ds.density:.2%} dense")

base = dict(epochs=5, eta0=0.5, lr_mode="fixed", update_rule="prox", seed=3)

results = {}
for mode in ("off", "on"):
    t0 = time.perf_counter()
    rec = run_vr_sgd(SolverConfig(lazy=mode, **base), obj)
    results[mode] = (rec, time.perf_counter() - t0)

dense_rec, dense_t = results["off"]
lazy_rec, lazy_t = results["on"]

drift = np.linalg.norm(lazy_rec.x_final - dense_rec.x_final) \
    / np.linalg.norm(dense_rec.x_final)
print(f"\nfinal-iterate relative difference: {drift:.2e}")
print(f"coordinate updates: dense {dense_rec.coord_updates:,} "
      f"vs lazy {lazy_rec.coord_updates:,} "
      f"({lazy_rec.coord_updates / dense_rec.coord_updates:.2%})")
print(f"wall time: dense {dense_t:.2f}s vs lazy {lazy_t:.2f}s")

print("""
The two runs follow the identical random index sequence, so the iterates
agree to rounding error while the lazy path touches under 1% as many
coordinates. The wall-clock win tracks the touch ratio once the feature
dimension is large enough that per-step dense vector ops dominate.""")
