# tests/test_boundary.py

import numpy as np
import pytest

from conformext.exceptions import NonMonotoneParametrization
from conformext.services.boundary import (
    CircleMapTrace,
    OwnTrace,
    PolygonArcLength,
    Reparametrized,
    TraceTable,
    map_domain,
)
from conformext.services.conformal import SQUARE_HALF_DIAGONAL


def test_arc_length_parametrization_runs_around_once(unit_square):
    param = PolygonArcLength(unit_square, start=0.5)
    points = param(np.array([0.0, 0.5 * np.pi, 2.0 * np.pi]))
    np.testing.assert_allclose(points, [0.5 + 0j, 1.0 + 0.5j, 0.5 + 0j], atol=1e-12)


def test_circle_map_is_periodic(disk_map):
    knots = np.array([[0.0, 0.0], [np.pi, 0.5 * np.pi], [2.0 * np.pi, 2.0 * np.pi]])
    param = CircleMapTrace(disk_map, knots)
    theta = np.array([0.5, 2.0, 4.0])
    np.testing.assert_allclose(param.circle_map(theta + 2.0 * np.pi), param.circle_map(theta) + 2.0 * np.pi)
    np.testing.assert_allclose(param(np.pi), 1j, atol=1e-12)


@pytest.mark.parametrize("knots", [
    [[0.0, 0.0], [1.0, 2.0], [2.0, 1.5], [2.0 * np.pi, 2.0 * np.pi]],
    [[0.0, 0.0], [np.pi, 1.0], [2.0 * np.pi, 3.0 * np.pi]],
])
def test_circle_maps_must_be_monotone_and_wind_once(disk_map, knots):
    with pytest.raises(NonMonotoneParametrization):
        Reparametrized(OwnTrace(disk_map), np.asarray(knots))


def test_trace_table_inverts_the_square_map(square_map):
    table = TraceTable(square_map, size=1024)
    assert table.period == pytest.approx(4.0 * np.sqrt(2.0) * SQUARE_HALF_DIAGONAL)
    theta = np.array([0.3, 1.0, 2.5])
    xi = table.invert(OwnTrace(square_map)(theta), theta)
    np.testing.assert_allclose(xi, theta, atol=1e-3)


def test_preimage_angles_of_an_arc_length_parametrization(square_map, square_domain):
    param = PolygonArcLength(square_domain)
    theta = np.linspace(0.0, 2.0 * np.pi, 9)[:-1]
    xi = param.preimage_angles(square_map, theta)
    assert np.all(np.diff(xi) > 0)
    assert xi[-1] - xi[0] < 2.0 * np.pi


def test_map_domain(square_map, disk_map):
    assert map_domain(disk_map) is None
    assert map_domain(square_map).n_vertices == 4
