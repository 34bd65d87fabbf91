"""Just-in-time per-coordinate updates for anchored inner loops on sparse data.

Between touches of coordinate j, every inner step applies the same
data-independent scalar update

    x_j <- c2 * soft(c0 * x_j + d_j, tau)

(the anchor-gradient and regularizer contributions; the stochastic term only
ever lands on the sampled row's support). With tau = 0 the update is affine
and t skipped steps collapse into one closed-form replay; with tau > 0 (an l1
term) the replay is an exact scalar loop. Running per-coordinate sums are
maintained so epoch averages match the dense path.
"""

import numpy as np

from .prox import soft_threshold

__all__ = ["replay_affine", "affine_orbit_sum", "LazyVector"]


def replay_affine(x, c, d, t):
    """Value after t steps of x <- c*x + d."""
    if t == 0:
        return x
    if abs(c - 1.0) < 1e-12:
        return x + t * d
    ct = c ** t
    return ct * x + d * (ct - 1.0) / (c - 1.0)


def affine_orbit_sum(x, c, d, t):
    """Sum of the t values visited by x <- c*x + d (excluding the start)."""
    if t == 0:
        return 0.0
    if abs(c - 1.0) < 1e-12:
        # arithmetic drift: x + d, x + 2d, ...
        return t * x + d * t * (t + 1) / 2.0
    ct = c ** t
    geo = c * (ct - 1.0) / (c - 1.0)           # c + c^2 + ... + c^t
    return x * geo + d * (geo - t) / (c - 1.0)  # d * sum_{u<=t} (c^u-1)/(c-1)


class LazyVector:
    """One epoch's iterate with deferred off-support updates.

    Scalar step model: x_j <- c2 * soft(c0 * x_j + d_j + e, tau), where e is
    the stochastic term (zero on skipped steps). Tracks `updates`, the number
    of coordinate-update operations applied (a collapsed affine replay counts
    one per coordinate; scalar-loop replays count each step).
    """

    def __init__(self, x, c0, d, tau, c2):
        self.x = np.array(x, dtype=np.float64)
        self.c0 = float(c0)
        self.d = np.asarray(d, dtype=np.float64)
        self.tau = float(tau)
        self.c2 = float(c2)
        self.last = np.zeros(len(self.x), dtype=np.intp)
        self.acc = np.zeros(len(self.x))
        self.updates = 0
        # affine composition for the tau = 0 fast path
        self._c = self.c2 * self.c0
        self._dd = self.c2 * self.d

    def catch_up(self, idx, k):
        """Replay coordinates idx through step k; returns their values."""
        x, acc, last = self.x, self.acc, self.last
        if self.tau == 0.0:
            c = self._c
            for j in idx:
                t = k - last[j]
                if t:
                    xj = x[j]
                    acc[j] += affine_orbit_sum(xj, c, self._dd[j], t)
                    x[j] = replay_affine(xj, c, self._dd[j], t)
                    last[j] = k
                    self.updates += 1
        else:
            c0, c2, tau, d = self.c0, self.c2, self.tau, self.d
            for j in idx:
                t = k - last[j]
                if t:
                    xj = x[j]
                    dj = d[j]
                    s = 0.0
                    for _ in range(t):
                        xj = c2 * soft_threshold(c0 * xj + dj, tau)
                        s += xj
                    x[j] = xj
                    acc[j] += s
                    last[j] = k
                    self.updates += t
        return x[idx]

    def apply_step(self, idx, k, e):
        """On-support update for step k -> k+1 with stochastic term e per idx."""
        v = self.c0 * self.x[idx] + self.d[idx] + e
        if self.tau:
            v = soft_threshold(v, self.tau)
        v *= self.c2
        self.x[idx] = v
        self.acc[idx] += v
        self.last[idx] = k + 1
        self.updates += len(idx)

    def flush(self, m):
        """Replay every coordinate through step m (end of epoch)."""
        self.catch_up(np.arange(len(self.x)), m)
        return self.x, self.acc
