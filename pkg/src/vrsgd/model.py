"""Composite objectives F(x) = (1/n) sum_i f_i(x) + g(x) over linear models.

Each loss is a scalar link psi(z, b) applied at z = a_i . x, so component
gradients are psi'(z, b) * a_i. Regularizers cover none / l2 / l1 / elastic
net. The ``fold_l2`` flag moves the l2 term from g into every f_i (used when a
solver wants a smooth f and a purely non-smooth g).
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LossFamily",
    "loss_family",
    "LOSS_KINDS",
    "Regularizer",
    "no_reg",
    "l2_reg",
    "l1_reg",
    "elastic_net",
    "Objective",
    "make_objective",
    "component_value",
    "component_gradient",
    "objective_value",
    "smooth_value",
    "smoothness_constant",
]


def _sigmoid(t):
    """Overflow-safe 1 / (1 + exp(-t)) for scalars or arrays."""
    t = np.asarray(t, dtype=np.float64)
    u = np.exp(-np.abs(t))
    return np.where(t >= 0, 1.0 / (1.0 + u), u / (1.0 + u))


def _logistic_value(z, b):
    # log(1 + exp(-b z)) without overflow for |z| > 700
    return np.logaddexp(0.0, -b * z)


def _logistic_deriv(z, b):
    return -b * _sigmoid(-b * z)


def _squared_value(z, b):
    return 0.5 * (z - b) ** 2


def _squared_deriv(z, b):
    return z - b


def _sigmoid_loss_value(z, b):
    # 1 / (1 + exp(b z)): bounded in (0, 1), non-convex in x
    return _sigmoid(-b * z)


def _sigmoid_loss_deriv(z, b):
    s = _sigmoid(-b * z)
    return -b * s * (1.0 - s)


def _eigen_value(z, b):
    return -z * z


def _eigen_deriv(z, b):
    return -2.0 * z


@dataclass(frozen=True)
class LossFamily:
    """Scalar link psi(z, b) with derivative and curvature bound sup |psi''|."""

    kind: str
    value: callable
    deriv: callable
    curvature: float
    pm1_labels: bool  # labels restricted to {-1, +1}


# sup over z of |d^2/dz^2 (1+e^z)^(-1)| is attained where the third derivative
# vanishes and equals 1/(6*sqrt(3)).
_SIGMOID_CURVATURE = 1.0 / (6.0 * np.sqrt(3.0))

_FAMILIES = {
    "logistic": LossFamily("logistic", _logistic_value, _logistic_deriv,
                           0.25, True),
    "squared": LossFamily("squared", _squared_value, _squared_deriv,
                          1.0, False),
    "nonconvex-sigmoid": LossFamily("nonconvex-sigmoid", _sigmoid_loss_value,
                                    _sigmoid_loss_deriv, _SIGMOID_CURVATURE,
                                    True),
    "eigen-quadratic": LossFamily("eigen-quadratic", _eigen_value,
                                  _eigen_deriv, 2.0, False),
}

LOSS_KINDS = tuple(_FAMILIES)


def loss_family(kind):
    try:
        return _FAMILIES[kind]
    except KeyError:
        raise ValueError(f"unsupported loss kind {kind!r}") from None


@dataclass(frozen=True)
class Regularizer:
    """g(x) = (lam1/2)||x||^2 + lam2 ||x||_1 (kind restricts which terms exist)."""

    kind: str
    lam1: float = 0.0
    lam2: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "l2", "l1", "elastic-net"):
            raise ValueError(f"unknown regularizer kind {self.kind!r}")
        if self.lam1 < 0 or self.lam2 < 0:
            raise ValueError("regularizer coefficients must be >= 0")
        if self.kind == "none" and (self.lam1 or self.lam2):
            raise ValueError("kind 'none' takes no coefficients")
        if self.kind == "l2" and self.lam2:
            raise ValueError("kind 'l2' takes no l1 coefficient")
        if self.kind == "l1" and self.lam1:
            raise ValueError("kind 'l1' takes no l2 coefficient")

    @property
    def is_smooth(self):
        return self.lam2 == 0.0

    def value(self, x):
        v = 0.0
        if self.lam1:
            v += 0.5 * self.lam1 * float(x @ x)
        if self.lam2:
            v += self.lam2 * float(np.abs(x).sum())
        return v

    def grad(self, x):
        if not self.is_smooth:
            raise ValueError("l1 term is not differentiable; use the prox path")
        return self.lam1 * x


def no_reg():
    return Regularizer("none")


def l2_reg(lam1):
    return Regularizer("l2", lam1=lam1)


def l1_reg(lam2):
    return Regularizer("l1", lam2=lam2)


def elastic_net(lam1, lam2):
    return Regularizer("elastic-net", lam1=lam1, lam2=lam2)


@dataclass(frozen=True)
class Objective:
    """Immutable composite objective over a dataset.

    With ``fold_l2`` set, each f_i(x) = psi(a_i.x, b_i) + (lam1/2)||x||^2 and g
    keeps only the l1 part; otherwise f_i is the bare loss and g carries the
    whole regularizer.
    """

    data: object
    loss: LossFamily
    reg: Regularizer
    fold_l2: bool = False
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.loss.pm1_labels:
            lab = self.data.labels
            if not np.all((lab == 1.0) | (lab == -1.0)):
                raise ValueError(
                    f"{self.loss.kind} loss requires labels in {{-1, +1}}")
        if self.fold_l2 and self.reg.lam1 == 0.0:
            raise ValueError("fold_l2 requires an l2 coefficient")
        if self.loss.kind == "eigen-quadratic" and self.reg.kind != "none":
            raise ValueError("the eigen objective carries no regularizer")

    # coefficients as seen by f (smooth part) and g (the rest)
    @property
    def lam1(self):
        return self.reg.lam1

    @property
    def lam2(self):
        return self.reg.lam2

    @property
    def lam1_in_f(self):
        return self.reg.lam1 if self.fold_l2 else 0.0

    @property
    def lam1_in_g(self):
        return 0.0 if self.fold_l2 else self.reg.lam1

    @property
    def n(self):
        return self.data.n

    @property
    def d(self):
        return self.data.d

    @property
    def mu(self):
        """Strong-convexity modulus: the l2 coefficient when present, else 0."""
        return self.reg.lam1

    @property
    def L(self):
        return smoothness_constant(self)

    def g_value(self, x):
        v = self.reg.value(x)
        if self.fold_l2:
            v -= 0.5 * self.reg.lam1 * float(x @ x)
        return v

    def g_grad(self, x):
        """Gradient of g; valid only when the non-folded part is smooth."""
        if self.lam2 != 0.0:
            raise ValueError("g has an l1 term; use the prox path")
        return self.lam1_in_g * x

    @property
    def g_is_smooth(self):
        return self.lam2 == 0.0


def make_objective(ds, loss_kind, reg=None, fold_l2=False):
    """Convenience constructor from a dataset and a loss-kind string."""
    return Objective(ds, loss_family(loss_kind), reg or no_reg(),
                     fold_l2=fold_l2)


def component_value(obj, i, x):
    """f_i(x)."""
    z = obj.data.row_dot(i, x)
    v = float(obj.loss.value(np.float64(z), obj.data.labels[i]))
    if obj.fold_l2:
        v += 0.5 * obj.reg.lam1 * float(x @ x)
    return v


def component_gradient(obj, i, x):
    """grad f_i(x) = psi'(a_i.x, b_i) a_i  (+ lam1 x when folded)."""
    z = obj.data.row_dot(i, x)
    coeff = float(obj.loss.deriv(np.float64(z), obj.data.labels[i]))
    out = obj.lam1_in_f * x if obj.fold_l2 else np.zeros(obj.d)
    obj.data.add_row(out, i, coeff)
    return out


def smooth_value(obj, x):
    """f(x) = (1/n) sum_i f_i(x)."""
    z = obj.data.matvec(x)
    v = float(np.mean(obj.loss.value(z, obj.data.labels)))
    if obj.fold_l2:
        v += 0.5 * obj.reg.lam1 * float(x @ x)
    return v


def objective_value(obj, x):
    """F(x) = f(x) + g(x); the split between f and g never changes the total."""
    z = obj.data.matvec(x)
    v = float(np.mean(obj.loss.value(z, obj.data.labels)))
    return v + obj.reg.value(x)


def smoothness_constant(obj):
    """L = max_i c_psi ||a_i||^2 (+ lam1 when the l2 term sits inside f)."""
    cache = obj._cache
    if "L" not in cache:
        L = obj.loss.curvature * float(np.max(obj.data.row_norms) ** 2)
        if obj.fold_l2:
            L += obj.reg.lam1
        cache["L"] = L
    return cache["L"]
