# tests/test_layout.py

import numpy as np
import pytest

from conformext.exceptions import PointOutside
from conformext.services.geometry import contains
from conformext.services.layout import (
    TubeDistanceOracle,
    layout_polylines,
    point_segment_distance,
    segment_distance,
    unfolded_chain,
)


@pytest.fixture(scope="module")
def tube_oracle(alpha_one_plan):
    return TubeDistanceOracle(alpha_one_plan.layout)


def test_point_segment_distance():
    z = np.array([2.0 + 0j, 0.5 + 1j, -1.0 + 0j])
    p = np.zeros(3, dtype=complex)
    q = np.ones(3, dtype=complex)
    np.testing.assert_allclose(point_segment_distance(z, p, q), [1.0, 1.0, 1.0])


def test_segment_distance_between_parallel_segments():
    d = segment_distance(np.array([0j]), np.array([1 + 0j]), np.array([1j]), np.array([1 + 1j]))
    assert d[0] == pytest.approx(1.0)


def test_unfolded_chain_is_a_straight_tube(alpha_one_plan):
    chain = unfolded_chain(alpha_one_plan.a, alpha_one_plan.c_M, 4)
    run = float(np.sum(alpha_one_plan.a[1:5]))
    inside = contains(chain, np.array([0.5 * run + 0j, -0.5 * alpha_one_plan.c_M * alpha_one_plan.a[1] + 0j]))
    assert inside.all()
    assert chain.vertices[:, 0].max() == pytest.approx(run)


def test_locate(alpha_one_plan, tube_oracle):
    layout = alpha_one_plan.layout
    cells = tube_oracle.locate(np.array([layout.base, 1e6 + 0j]))
    assert cells.tolist() == [0, -1]
    with pytest.raises(PointOutside):
        tube_oracle.lower(np.array([1e6 + 0j]))


def test_lower_never_exceeds_upper(alpha_one_plan, tube_oracle):
    centers = alpha_one_plan.layout.centers
    mids = 0.5 * (centers[1:-1] + centers[2:])
    lower = tube_oracle.lower(mids)
    upper = tube_oracle.upper(mids)
    assert np.all(lower <= upper + 1e-12)
    assert np.all(lower >= np.abs(mids - alpha_one_plan.layout.base) - 1e-12)
    # distances keep growing along the tube
    assert lower[-1] > lower[0]


def test_layout_polylines(alpha_one_plan):
    lines = layout_polylines(alpha_one_plan.layout)
    assert len(lines) == alpha_one_plan.layout.n_gates
    assert all(line.shape == (2,) for line in lines)
