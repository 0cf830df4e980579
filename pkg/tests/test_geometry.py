# tests/test_geometry.py

import numpy as np
import pytest

from conformext.exceptions import DegenerateEdge, PointOutside, SelfIntersecting, TooFewVertices
from conformext.services.geometry import (
    METRICATION_FACTOR,
    GridDistanceOracle,
    boundary_coordinate,
    boundary_point_at,
    build_polygon_domain,
    contains,
    count_polyline_crossings,
    distance_to_boundary,
    internal_distance,
    perimeter,
    polygon_area,
)


def test_clockwise_input_is_reoriented():
    domain = build_polygon_domain([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert polygon_area(domain) == pytest.approx(1.0)


def test_closing_vertex_is_dropped(unit_square):
    closed = build_polygon_domain([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]])
    assert closed.n_vertices == unit_square.n_vertices == 4


def test_invalid_polygons_are_rejected():
    with pytest.raises(TooFewVertices):
        build_polygon_domain([[0, 0], [1, 0]])
    with pytest.raises(DegenerateEdge):
        build_polygon_domain([[0, 0], [1, 0], [1, 0], [0, 1]])
    with pytest.raises(SelfIntersecting):
        build_polygon_domain([[0, 0], [1, 1], [1, 0], [0, 1]])


def test_contains(unit_square):
    inside = contains(unit_square, [[0.5, 0.5], [0.01, 0.99], [1.5, 0.5], [-0.1, 0.2]])
    assert inside.tolist() == [True, True, False, False]


def test_perimeter_and_boundary_coordinates(unit_square):
    assert perimeter(unit_square) == pytest.approx(4.0)
    s = np.array([0.25, 1.5, 3.75])
    points = boundary_point_at(unit_square, s)
    np.testing.assert_allclose(boundary_coordinate(unit_square, points), s, atol=1e-12)


def test_convex_internal_distance_is_close_to_euclidean(unit_square):
    d = internal_distance(unit_square, [0.1, 0.1], [0.9, 0.9], pitch=0.02)
    euclid = 0.8 * np.sqrt(2.0)
    assert euclid - 1e-9 <= d <= METRICATION_FACTOR * euclid + 0.04


def test_internal_distance_walks_around_the_slot(u_corridor):
    d = internal_distance(u_corridor, [0.5, 1.5], [2.5, 1.5], pitch=0.05)
    detour = 2.0 * np.hypot(0.5, 1.0) + 1.0
    assert detour - 1e-9 <= d <= 1.12 * detour
    assert d == internal_distance(u_corridor, [2.5, 1.5], [0.5, 1.5], pitch=0.05)


def test_internal_distance_rejects_outside_points(u_corridor):
    with pytest.raises(PointOutside):
        internal_distance(u_corridor, [0.5, 1.5], [1.5, 1.5], pitch=0.05)


def test_grid_oracle_brackets(u_corridor):
    oracle = GridDistanceOracle(u_corridor, 0.5 + 1.5j, pitch=0.05)
    points = np.array([2.5 + 1.5j, 1.5 + 0.25j, 0.5 + 0.5j])
    lower, upper = oracle.lower(points), oracle.upper(points)
    assert np.all(lower <= upper)
    assert upper[0] > 2.0 * np.hypot(0.5, 1.0) + 1.0 - 1e-9


def test_polyline_crossings():
    a = np.array([0.0 + 0.0j, 1.0 + 1.0j])
    b = np.array([0.0 + 1.0j, 1.0 + 0.0j])
    c = np.array([2.0 + 0.0j, 3.0 + 0.0j])
    count, offenders = count_polyline_crossings([a, b, c])
    assert count == 1
    assert offenders == [(0, 1)]


@pytest.mark.parametrize(
    "first, second, expected",
    [
        ([0j, 2 + 0j], [1 + 0j, 1 + 1j], 1),  # end vertex resting on an interior point
        ([0j, 2 + 0j], [1 + 0j, 3 + 0j], 1),  # collinear overlap
        ([0j, 2 + 0j], [0j, 1 + 1j], 0),  # common end vertex
        ([0j, 1 + 0j, 2 + 1j], [2 + 1j, 3 + 0j], 0),  # chained ends
        ([0j, 2 + 0j], [2 + 0j, 1 + 0j], 1),  # common end vertex, folding back along the other
    ],
)
def test_polyline_contacts(first, second, expected):
    count, _ = count_polyline_crossings([np.array(first), np.array(second)])
    assert count == expected


def test_distance_to_boundary(unit_square):
    assert distance_to_boundary(unit_square, [0.5, 0.5]) == pytest.approx(0.5)
    dist = distance_to_boundary(unit_square, np.array([[0.5, 0.5], [0.1, 0.7]]))
    np.testing.assert_allclose(dist, [0.5, 0.1])
    with pytest.raises(PointOutside):
        distance_to_boundary(unit_square, [1.5, 0.5])
