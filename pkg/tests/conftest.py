"""Shared instances for the test suite."""

import pytest

from vrsgd import (
    gen_synthetic,
    l2_reg,
    make_objective,
    normalize_rows,
    objective_value,
    ridge_closed_form,
)


@pytest.fixture(scope="session")
def ridge_instance():
    """Normalized 60x6 least-squares instance with an l2 term and known F*."""
    ds = normalize_rows(gen_synthetic("ridge", 60, 6, seed=10))
    obj = make_objective(ds, "squared", l2_reg(1e-2))
    xstar = ridge_closed_form(ds, 1e-2)
    return obj, xstar, objective_value(obj, xstar)


@pytest.fixture(scope="session")
def logistic_instance():
    """Normalized 40x7 classification instance with an l2 term."""
    ds = normalize_rows(gen_synthetic("logistic", 40, 7, seed=3))
    return make_objective(ds, "logistic", l2_reg(1e-2))
