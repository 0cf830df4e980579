# tests/test_phi.py

import numpy as np
import pytest

from conformext.exceptions import Inconclusive, NegativeArgument
from conformext.services.phi import (
    check_subadditivity,
    classify_tail_integral,
    estimate_subadditivity_M,
    phi_alpha,
    phi_eval,
    phi_table,
    quasilinearity_constant,
)


def test_alpha_log_values():
    spec = phi_alpha(1.0)
    assert phi_eval(spec, 0.0) == 0.0
    assert phi_eval(spec, 1.0) == pytest.approx(np.log(np.e + 1.0))
    with pytest.raises(NegativeArgument):
        phi_eval(spec, -1.0)


def test_table_with_power_tail():
    spec = phi_table([[0.0, 0.0], [1.0, 1.0], [2.0, 3.0]], "power", 2.0)
    np.testing.assert_allclose(phi_eval(spec, np.array([0.5, 1.5, 4.0])), [0.5, 2.0, 12.0])


def test_table_knots_must_increase():
    with pytest.raises(ValueError):
        phi_table([[0.0, 0.0], [1.0, 2.0], [2.0, 1.0]])


@pytest.mark.parametrize("alpha, kind", [(0.0, "divergent"), (0.5, "divergent"), (1.0, "divergent"),
                                         (1.5, "convergent"), (2.0, "convergent")])
def test_tail_dichotomy(alpha, kind):
    verdict = classify_tail_integral(phi_alpha(alpha))
    assert verdict.kind == kind
    if verdict.is_convergent:
        assert np.isfinite(verdict.value) and verdict.value >= verdict.partial


def test_tail_without_declared_continuation_is_inconclusive():
    with pytest.raises(Inconclusive):
        classify_tail_integral(phi_table([[0.0, 0.0], [1.0, 1.0]]))


def test_tail_start_must_be_positive():
    with pytest.raises(NegativeArgument):
        classify_tail_integral(phi_alpha(1.0), t0=0.0)


def test_tiny_budget_is_inconclusive():
    with pytest.raises(Inconclusive) as err:
        classify_tail_integral(phi_alpha(1.0), budget=3)
    assert err.value.exit_code == 3


def test_subadditivity_constant_for_alpha_one():
    estimate = estimate_subadditivity_M(phi_alpha(1.0))
    assert estimate.M_hat == pytest.approx(1.246, abs=0.01)
    assert estimate.spec.M == pytest.approx(1.05 * estimate.M_hat)
    assert check_subadditivity(estimate.spec, seed=3) <= 1.0


def test_quasilinearity():
    spec = phi_alpha(1.0)
    assert quasilinearity_constant(spec, 1.0) == 1.0
    assert 2.0 < quasilinearity_constant(spec, 2.0) < 2.5
