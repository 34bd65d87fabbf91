"""Explore the strongly convex per-epoch rate bound before running anything.

The closed-form contraction factor rho(L, mu, eta, m, c) answers sizing
questions offline: how long must an epoch be, and how large a step can you
take, before the theory certifies geometric progress? Here we tabulate rho
over (eta, m) grids for a condition number of 100 and show the two regimes
that bound it: too-short epochs (the full-gradient cost never amortizes) and
too-large steps (the variance term blows up as eta -> 1/(3L)).

Run:  python demos/rate_calculator.py
"""

from vrsgd import theoretical_rate_sc

L, mu, c = 1.0, 0.01, 1.0  # condition number L/mu = 100

# ---------------------------------------------------------------------------
# rho over epoch lengths at a few step sizes. "--" marks a divergent bound.
m_grid = [200, 500, 1000, 2000, 5000, 20000]
eta_grid = [0.02, 0.05, 0.1, 0.2, 0.3]

header = "eta\\m " + "".join(f"{m:>9}" for m in m_grid)
print(header)
for eta in eta_grid:
    cells = []
    for m in m_grid:
        report = theoretical_rate_sc(L, mu, eta, m, c)
        cells.append(f"{report.rho:>9.3f}" if report.convergent
                     else f"{'--':>9}")
    print(f"{eta:<6.2f}" + "".join(cells))

# ---------------------------------------------------------------------------
# The certified sweet spot: pick the best eta on a fine grid for m = 2n-ish.
m = 2000
best = min((theoretical_rate_sc(L, mu, k / 1000.0, m, c)
            for k in range(1, 333)), key=lambda r: r.rho)
print(f"\nbest certified rate at m={m}: rho={best.rho:.4f} "
      f"at eta={best.eta:.3f} (eta*L={best.eta * L:.3f})")
print("epochs to shrink the gap by 1e6:",
      f"{-13.8155 / __import__('math').log(best.rho):.1f}"
      if best.rho < 1 else "unbounded")

print("""
Two lessons transfer to practice. First, epochs shorter than a few times the
condition number cannot be certified at all -- the c/(mu*eta*m) restart term
dominates. Second, the certified eta (~0.1/L here) is far more permissive
than classic small-step analyses, which matches the step sizes that actually
work in the solver demos.""")
