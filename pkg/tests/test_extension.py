# tests/test_extension.py

import numpy as np
import pytest

from conformext.services.boundary import OwnTrace
from conformext.services.crosscuts import build_dyadic_cycles
from conformext.services.extension import (
    build_extension,
    disk_energy,
    graded_rule,
    ideal_polygon_energy,
    vertex_rule,
)


def test_graded_rule_integrates_polynomials():
    u, w = graded_rule(5, 6)
    assert w.sum() == pytest.approx(1.0)
    assert np.dot(w, u ** 3) == pytest.approx(0.25)


def test_vertex_rule_absorbs_square_root_ends():
    u, w = vertex_rule(5, 6)
    assert np.all((u >= 0.0) & (u <= 1.0))
    assert w.sum() == pytest.approx(1.0, rel=1e-12)
    assert np.dot(w, np.sqrt(u * (1.0 - u))) == pytest.approx(np.pi / 8.0, rel=1e-10)


def test_disk_energy_of_the_identity(disk_map):
    assert disk_energy(disk_map, 0.5, 1.5) == pytest.approx(0.25 * np.pi, rel=1e-10)


def test_ideal_square_area(disk_map):
    # inscribed square minus four circular segments of the radius-one geodesic circles
    xi = np.arange(4) * 0.5 * np.pi
    segment = 0.25 * np.pi - 0.5
    assert ideal_polygon_energy(disk_map, xi, 2.0) == pytest.approx(2.0 - 4.0 * segment, rel=1e-6)


def test_identity_extension_fills_the_ideal_polygon(disk_map):
    N = 8
    family = build_dyadic_cycles(OwnTrace(disk_map), disk_map, N)
    report = build_extension(disk_map, OwnTrace(disk_map), family, p=1.5, audit=False)
    assert report.depths == list(range(3, N + 1))
    assert np.all(np.diff(report.energies) > 0)
    # each of the 2^N lunes under a short geodesic is close to a half disk of radius pi / 2^N
    assert report.energies[-1] == pytest.approx(np.pi - np.pi ** 3 / 2 ** (N + 1), rel=1e-2)
    assert report.direct_energy == pytest.approx(report.energies[-1], rel=1e-9)
    assert report.endpoint_mismatch < 1e-12
    assert report.overlaps == []


def test_annulus_cells_and_model_check(disk_map):
    family = build_dyadic_cycles(OwnTrace(disk_map), disk_map, 6)
    report = build_extension(disk_map, OwnTrace(disk_map), family, p=1.5, model="annulus", audit=False)
    assert report.inner_energy == pytest.approx(np.pi * (1.0 - 2.0 ** -3) ** 2, rel=1e-10)
    assert np.all(np.isfinite(report.energies))
    with pytest.raises(ValueError):
        build_extension(disk_map, OwnTrace(disk_map), family, model="radial", audit=False)


@pytest.mark.slow
def test_square_extension_energy_settles(square_map):
    family = build_dyadic_cycles(OwnTrace(square_map), square_map, 7)
    report = build_extension(square_map, OwnTrace(square_map), family, p=1.5)
    assert report.audit is not None
    assert report.audit.passed
    assert np.all(report.increments > 0)
    assert report.increments[-1] < report.increments[0]


@pytest.mark.slow
def test_square_extension_energy_at_depth_twelve(square_map):
    family = build_dyadic_cycles(OwnTrace(square_map), square_map, 12)
    report = build_extension(square_map, OwnTrace(square_map), family, p=1.5, audit=False)
    assert report.depths[-1] == 12
    # relative changes E(d)/E(d-1) - 1 for d = 10, 11, 12
    late = report.increments[report.depths.index(10) - 1:]
    assert late.size == 3
    assert np.all(late < 0.02)
    assert report.energies[-1] == pytest.approx(report.direct_energy, rel=0.15)
