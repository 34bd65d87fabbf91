"""Leading eigenvector with a small spectral gap: power iteration vs anchors.

Power iteration pays one full pass per step and contracts like the eigenvalue
ratio lambda2/lambda1 — painful when the top two eigenvalues are 4% apart.
The stochastic solvers below touch one random row at a time but anchor their
updates to an occasional full matrix-vector product, so they inherit the
cheap iterations AND a fast rate. We build a covariance with a pinned
spectrum, run all three, and compare passes to reach 1e-8 relative error.

Run:  python demos/eigen_leading_vector.py
"""

import numpy as np

from vrsgd import Dataset, SolverConfig, eigen_oracle, passes_to_tolerance, run_eigen

# ---------------------------------------------------------------------------
# Rotate a chosen eigenvalue profile into a dense data matrix: C = A^T A / n
# then has eigenvalues exactly `lams`, with a 4% relative gap at the top.
rng = np.random.Generator(np.random.Philox(99))
basis = np.linalg.svd(rng.standard_normal((200, 20)), full_matrices=False)
lams = np.concatenate(([1.0, 0.96], np.linspace(0.5, 0.05, 18)))
A = basis[0] @ np.diag(np.sqrt(200 * lams)) @ basis[2]
ds = Dataset.from_dense(A, np.ones(200))

lam_top, v_top = eigen_oracle(ds)
print(f"top eigenvalue {lam_top:.6f}, relative gap "
      f"{(lams[0] - lams[1]) / lams[0]:.2%}")

# ---------------------------------------------------------------------------
# Same tolerance for everyone; epochs are sized so each method converges.
print(f"\n{'method':<10}{'final rel err':>16}{'passes to 1e-8':>17}")
for method, epochs in (("power", 600), ("vr_pca", 80), ("vr_sgd", 80)):
    rec = run_eigen(SolverConfig(epochs=epochs, seed=0), ds, method=method)
    align = abs(float(rec.x_final @ v_top))  # sign-free alignment check
    assert align > 1.0 - 1e-6
    print(f"{method:<10}{abs(rec.gap[-1]):>16.2e}"
          f"{passes_to_tolerance(rec, 1e-8):>17.1f}")

print("""
The anchored stochastic methods cut the pass count roughly in half against
power iteration on this spectrum, and the advantage widens as the gap
shrinks: power's pass count scales like 1/gap, the anchored rate does not.""")
