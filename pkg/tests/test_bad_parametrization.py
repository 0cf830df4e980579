# tests/test_bad_parametrization.py

import numpy as np
import pytest

from conformext.exceptions import InsufficientDepth
from conformext.services.bad_parametrization import (
    bad_parametrization,
    identity_plan,
    parametrization_from_plan,
    sample_disk_map,
    source_arcs,
    w11_lowerbound_probe,
)
from conformext.services.boundary import OwnTrace
from conformext.services.layout import TubeDistanceOracle


class EuclideanOracle:
    """Internal distance in a convex domain is the straight-line distance."""

    def __init__(self, base=0j):
        self.base = base

    def lower(self, points):
        return np.abs(np.asarray(points, dtype=complex) - self.base)

    upper = lower


@pytest.fixture(scope="module")
def tube(alpha_one_plan):
    layout = alpha_one_plan.layout
    oracle = TubeDistanceOracle(layout)
    plan = bad_parametrization(layout.domain, oracle, 4, omega0=layout.end_point)
    return layout, oracle, plan


def test_source_arcs():
    arcs = source_arcs(3)
    np.testing.assert_allclose(arcs[0], [np.pi / 4, np.pi / 2])
    np.testing.assert_allclose(arcs[1], [3 * np.pi / 4, 3 * np.pi / 4 + np.pi / 16])
    np.testing.assert_allclose(arcs[2], [7 * np.pi / 8, 7 * np.pi / 8 + np.pi / 64])
    # disjoint and accumulating at pi
    assert np.all(arcs[1:, 0] > arcs[:-1, 1])
    assert np.all(arcs[:, 1] < np.pi)


def test_intervals_are_certified(tube):
    _, _, plan = tube
    assert plan.max_certified == 4
    assert np.all(np.diff(plan.thresholds) > 0)
    assert np.all(plan.certified >= plan.thresholds)
    intervals = plan.intervals
    assert np.all(intervals[1:, 0] >= intervals[:-1, 1])
    assert np.all(intervals[:, 1] <= np.pi)


def test_parametrization_is_monotone(tube):
    layout, _, plan = tube
    param = parametrization_from_plan(layout.domain, plan)
    np.testing.assert_allclose(param(0.0), param(2 * np.pi), atol=1e-9)
    assert np.all(np.diff(plan.arc_knots[:, 1]) > 0)


def test_probe_increments_stay_bounded_below(tube):
    layout, oracle, plan = tube
    probe = w11_lowerbound_probe(plan, parametrization_from_plan(layout.domain, plan), oracle)
    assert probe.n == [1, 2, 3, 4]
    assert probe.growth
    assert np.all(np.diff(probe.partials) > 0)


def test_unreachable_level_raises(tube):
    layout, oracle, _ = tube
    with pytest.raises(InsufficientDepth) as err:
        bad_parametrization(layout.domain, oracle, 3, omega0=layout.end_point, unit=1e6)
    assert err.value.max_certified == 0


def test_own_trace_probe_decays(square_map):
    plan = identity_plan(square_map, 4)
    probe = w11_lowerbound_probe(plan, OwnTrace(square_map), EuclideanOracle())
    assert probe.L.size == 4
    assert not probe.growth
    assert probe.L[-1] < 0.25 * probe.L[0]


def test_probe_with_sampled_extension(square_map):
    plan = identity_plan(square_map, 3)
    angles = np.linspace(0.0, 2 * np.pi, 257)[:-1]
    extension = sample_disk_map(square_map, np.linspace(0.5, 1.0, 6), angles)
    probe = w11_lowerbound_probe(plan, OwnTrace(square_map), EuclideanOracle(), extension=extension)
    assert probe.radial.shape == (3,)
    assert np.all(probe.radial >= 0)
    assert probe.d_eta > 0


def test_sample_disk_map(disk_map):
    angles = np.linspace(0.0, 2 * np.pi, 9)[:-1]
    sampled = sample_disk_map(disk_map, [0.5, 1.0], angles)
    assert sampled.values.shape == (2, 8)
    np.testing.assert_allclose(sampled.values[0], 0.5 * np.exp(1j * angles), atol=1e-12)
    np.testing.assert_allclose(sampled.values[1], np.exp(1j * angles), atol=1e-12)
