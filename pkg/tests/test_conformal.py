# tests/test_conformal.py

import numpy as np
import pytest

from conformext.exceptions import CoincidentEndpoints, InvalidNormalization, OutsideDisk, PointOutside
from conformext.services.conformal import (
    SQUARE_HALF_DIAGONAL,
    boundary_trace,
    disk_automorphism,
    disk_to_square_map,
    evaluate_derivative,
    evaluate_map,
    hyperbolic_geodesic_disk,
    mobius_disk_to_halfplane,
    preimage,
    side_length_residual,
    solve_schwarz_christoffel,
)
from conformext.services.geometry import build_polygon_domain


def test_square_map_closed_form(square_map):
    assert SQUARE_HALF_DIAGONAL == pytest.approx(1.3110287771461, rel=1e-12)
    assert evaluate_map(square_map, 0.5) == pytest.approx(0.5032094, abs=1e-6)
    assert evaluate_derivative(square_map, 0.0) == pytest.approx(1.0)


def test_square_boundary_values(square_map):
    K = SQUARE_HALF_DIAGONAL
    assert boundary_trace(square_map, 0.0) == pytest.approx(K, abs=1e-8)
    assert boundary_trace(square_map, np.pi / 2) == pytest.approx(1j * K, abs=1e-8)
    assert boundary_trace(square_map, np.pi / 4) == pytest.approx(0.5 * K * (1 + 1j), abs=1e-7)


def test_identity_boundary_trace(disk_map):
    theta = np.linspace(0.0, 2.0 * np.pi, 7)
    np.testing.assert_allclose(boundary_trace(disk_map, theta), np.exp(1j * theta), atol=1e-12)


def test_preimage_inverts_the_map(square_map):
    z = np.array([0.3 + 0.2j, -0.6 + 0.1j, 0.05 - 0.7j])
    np.testing.assert_allclose(preimage(square_map, evaluate_map(square_map, z)), z, atol=1e-7)


def test_schwarz_christoffel_rectangle():
    domain = build_polygon_domain([[-1.0, -0.5], [1.0, -0.5], [1.0, 0.5], [-1.0, 0.5]])
    cmap = solve_schwarz_christoffel(domain, 0j)
    assert abs(evaluate_map(cmap, 0.0)) < 1e-8
    assert evaluate_derivative(cmap, 0.0).real > 0
    assert abs(evaluate_derivative(cmap, 0.0).imag) < 1e-8
    images = boundary_trace(cmap, cmap.prevertices)
    np.testing.assert_allclose(images, cmap.vertices, atol=1e-6 * cmap.diameter)
    assert side_length_residual(cmap) < 1e-5


def test_schwarz_christoffel_square_matches_the_closed_form():
    K = SQUARE_HALF_DIAGONAL
    corners = K * 1j ** np.arange(4)
    domain = build_polygon_domain(np.stack([corners.real, corners.imag], axis=1))
    cmap = solve_schwarz_christoffel(domain, 0j)
    pv = np.asarray(cmap.prevertices, dtype=float)
    gaps = np.mod(np.diff(np.append(pv, pv[0])), 2.0 * np.pi)
    np.testing.assert_allclose(gaps, 0.5 * np.pi, atol=1e-8)

    rng = np.random.default_rng(7)
    z = 0.9 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    exact = evaluate_map(disk_to_square_map(), z)
    assert np.max(np.abs(evaluate_map(cmap, z) - exact)) < 1e-5


def test_schwarz_christoffel_needs_an_interior_center(unit_square):
    with pytest.raises(PointOutside):
        solve_schwarz_christoffel(unit_square, 2.0 + 0j)


def test_geodesic_between_quarter_points():
    path = hyperbolic_geodesic_disk(1.0, 1j, 17)
    assert path[0] == 1.0 and path[-1] == 1j
    np.testing.assert_allclose(np.abs(path - (1 + 1j)), 1.0, atol=1e-12)
    assert np.all(np.abs(path[1:-1]) < 1.0)


def test_geodesic_needs_distinct_endpoints():
    with pytest.raises(CoincidentEndpoints):
        hyperbolic_geodesic_disk(1.0, 1.0, 9)


def test_normalizations_are_checked():
    with pytest.raises(InvalidNormalization):
        mobius_disk_to_halfplane(-1j)
    with pytest.raises(OutsideDisk):
        disk_automorphism(1.5 + 0j)
