# tests/test_series.py

import numpy as np
import pytest

from conformext.exceptions import BudgetExceeded, NonPositiveTerm
from conformext.services.series import (
    classify_weighted_series,
    divergence_witness,
    harmonic_number,
    replay_proof_bound,
    series_probe,
    weighted_partial_sums,
)
from conformext.utils.summation import KahanSummation, compensated_cumsum


def reciprocal(n):
    return 1.0 / n


def test_kahan_summation_keeps_low_bits():
    assert KahanSummation().extend([0.1] * 10) == 1.0
    np.testing.assert_array_equal(compensated_cumsum(np.ones(5)), [1.0, 2.0, 3.0, 4.0, 5.0])


def test_harmonic_numbers():
    assert harmonic_number(10) == pytest.approx(2.9289682539682538, rel=1e-15)
    assert harmonic_number(1_000_000) == pytest.approx(14.392726722865724, rel=1e-13)


def test_telescoping_bound_holds_for_every_prefix():
    replay = replay_proof_bound(series_probe(reciprocal, -1.0 / 3.0, N=10_000))
    assert replay.lhs == 1.0
    assert replay.max_relative_excess <= 1e-12


def test_negative_weight_converges_under_its_bound():
    verdict = classify_weighted_series(series_probe(reciprocal, -0.5, N=10_000))
    assert verdict.converges
    assert verdict.bound == pytest.approx(2.0)
    assert verdict.full_bound == pytest.approx(3.0)
    assert verdict.partial <= verdict.full_bound


def test_harmonic_series_diverges_with_witness():
    probe = series_probe(reciprocal, 0.0, N=1000)
    verdict = classify_weighted_series(probe)
    assert verdict.kind == "diverges"
    assert verdict.witness == pytest.approx(np.log(harmonic_number(1000)))
    assert divergence_witness(probe)[-1] == pytest.approx(verdict.witness)


def test_budget_exceeded_carries_the_witness():
    with pytest.raises(BudgetExceeded) as err:
        classify_weighted_series(series_probe(reciprocal, 0.0, N=1000), threshold=5.0)
    assert err.value.witness == pytest.approx(np.log(harmonic_number(1000)))


def test_partial_sums_follow_the_weight():
    table = weighted_partial_sums(series_probe([1.0, 1.0, 1.0], 0.0))
    np.testing.assert_allclose(table.S, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(table.partials, [1.0, 1.5, 1.5 + 1.0 / 3.0])


def test_terms_must_be_positive():
    with pytest.raises(NonPositiveTerm):
        weighted_partial_sums(series_probe([1.0, 0.0, 2.0], 0.5))
