# tests/test_crosscuts.py

import numpy as np
import pytest

from conformext.exceptions import GapTooWide, Inconclusive, NoValidN0, TailDivergent
from conformext.services.boundary import CircleMapTrace, OwnTrace
from conformext.services.crosscuts import (
    CYCLE_GAP,
    FamilyImages,
    audit_disjointness,
    audit_family,
    build_dyadic_cycles,
    cell_decomposition,
    crosscut,
    crosscut_length_bound_check,
    crosscut_sum,
    cycle_crosscut_sum,
    delta_integral,
    rotation_cycle,
)
from conformext.services.phi import phi_alpha


@pytest.fixture(scope="module")
def disk_family(disk_map):
    return build_dyadic_cycles(OwnTrace(disk_map), disk_map, 8)


def test_first_valid_generation_on_the_disk(disk_family):
    # chords 2 sin(pi / 2^n) drop below 4 pi / (1 + pi^2) from n = 3 on
    assert disk_family.n0 == 3
    assert list(disk_family.generations) == [3, 4, 5, 6, 7, 8]
    np.testing.assert_allclose(disk_family.xi_at(5), disk_family.params_at(5))


def test_no_valid_generation_when_too_shallow(disk_map):
    with pytest.raises(NoValidN0) as err:
        build_dyadic_cycles(OwnTrace(disk_map), disk_map, 2)
    assert err.value.exit_code == 4


def test_crosscut_length_is_between_chord_and_arc(disk_map):
    xi1, xi2 = 1.0 + 0j, np.exp(0.5j)
    cut = crosscut(disk_map, xi1, xi2, samples=65)
    chord = abs(xi2 - xi1)
    assert chord <= cut.length <= 0.5 * (1.0 + 1e-9) * np.pi * chord
    assert cut.refinement_change < 1e-3


def test_disk_crosscut_sum_converges(disk_map, disk_family):
    table = crosscut_sum(disk_map, disk_family, 1.5)
    assert table.convergent
    assert table.generations == [3, 4, 5, 6, 7, 8]
    assert np.all(table.ratios[-4:] < 0.97)
    assert len(table.length_rows()) == sum(2 ** n for n in table.generations)


@pytest.fixture(scope="module")
def deep_disk_images(disk_map):
    return FamilyImages(disk_map, build_dyadic_cycles(OwnTrace(disk_map), disk_map, 12))


def test_deep_disk_crosscuts_follow_the_closed_form(deep_disk_images):
    for n in range(3, 13):
        h = np.pi / 2 ** n
        lengths = deep_disk_images.lengths(n)
        chord = 2.0 * np.sin(h)
        assert lengths.size == 2 ** n
        assert np.all(lengths >= chord * (1.0 - 1e-12))
        assert np.all(lengths <= 0.5 * np.pi * chord)
        # exact geodesic length tan(h) (pi - 2h); the polyline sits just under it
        assert np.all(lengths >= 0.98 * np.tan(h) * (np.pi - 2.0 * h))


@pytest.mark.parametrize("p", [1.0, 1.5])
def test_deep_disk_sum_halves_each_generation(disk_map, deep_disk_images, p):
    table = crosscut_sum(disk_map, deep_disk_images.family, p, images=deep_disk_images)
    assert table.convergent
    assert table.generations[-1] == 12
    assert table.trailing_ratio == pytest.approx(0.5, abs=0.05)


def test_crosscut_sum_checks_its_inputs(disk_map, disk_family):
    with pytest.raises(ValueError):
        crosscut_sum(disk_map, disk_family, 2.0)
    shallow = build_dyadic_cycles(OwnTrace(disk_map), disk_map, 5)
    with pytest.raises(Inconclusive):
        crosscut_sum(disk_map, shallow, 1.5)


def test_reparametrized_family_keeps_its_parameters(disk_map):
    knots = np.array([[0.0, 0.0], [np.pi, 0.5 * np.pi], [2.0 * np.pi, 2.0 * np.pi]])
    family = build_dyadic_cycles(CircleMapTrace(disk_map, knots), disk_map, 7)
    assert family.parametrization == "circle_map"
    # the stretched half [pi, 2 pi] keeps generation 2 gaps too wide
    assert family.n0 == 3
    np.testing.assert_allclose(family.xi_at(3)[:5], np.arange(5) * np.pi / 8, atol=1e-12)


def test_cycle_sum_bounds_the_diameter(square_map):
    report = cycle_crosscut_sum(square_map, rotation_cycle(1.0 + 0j, 8))
    assert report.K == 8
    assert report.diam_bound >= square_map.diameter
    assert report.arc_length_between(0, 4) >= square_map.diameter - 1e-9


def test_cycle_gaps_are_limited(disk_map):
    with pytest.raises(GapTooWide):
        cycle_crosscut_sum(disk_map, rotation_cycle(1.0 + 0j, 4))


def test_cell_decomposition_geometry():
    decomp = cell_decomposition(1.0 + 0j, np.exp(0.8j), 6)
    assert decomp.indices[:4] == [1, -1, 2, -2]
    lo, hi = decomp.angles(1)
    assert (lo, hi) == pytest.approx((np.pi / 4, np.pi / 2))
    assert decomp.area(1) == pytest.approx(decomp.area(-1))
    with pytest.raises(GapTooWide):
        cell_decomposition(1.0 + 0j, -1.0 + 0j, 6)
    assert CYCLE_GAP == pytest.approx(4.0 * np.pi / (1.0 + np.pi ** 2))


def test_length_bound_needs_a_convergent_tail(disk_map):
    with pytest.raises(TailDivergent):
        crosscut_length_bound_check(disk_map, phi_alpha(1.0), 1.0 + 0j, np.exp(0.8j))


def test_length_bound_report(disk_map):
    report = crosscut_length_bound_check(disk_map, phi_alpha(2.0), 1.0 + 0j, np.exp(0.8j), m_max=5)
    assert report.lhs == pytest.approx(report.length ** 2)
    assert len(report.cells) == 10
    assert np.isfinite(report.empirical_c) and report.empirical_c > 0
    assert np.isfinite(report.delta_integral) and report.delta_integral > 0
    factors = report.rhs_factors
    assert factors["cells_integral"] == report.cells_integral
    assert factors["delta_integral"] == report.delta_integral


def test_delta_integral_stays_inside_the_disk(disk_map):
    # the deepest dyadic panels sit within 1e-18 of the circle
    decomp = cell_decomposition(1.0 + 0j, np.exp(0.8j), 5)
    shallow = delta_integral(disk_map, phi_alpha(2.0), decomp, levels=12)
    deep = delta_integral(disk_map, phi_alpha(2.0), decomp, levels=40)
    assert np.isfinite(deep) and deep > 0
    assert deep == pytest.approx(shallow, rel=1e-2)


def test_disjointness_audit():
    nested = [np.array([0j, 1 + 0j]), np.array([0j, 1j]), np.array([0.8 - 1j, 0.8 - 0.1j])]
    assert audit_disjointness(nested).passed

    crossing = nested + [np.array([0.5 - 1j, 0.5 + 1j])]
    audit = audit_disjointness(crossing)
    assert audit.crossings == 1
    assert audit.offenders == [(0, 3)]


@pytest.mark.slow
def test_disk_family_is_disjoint_to_depth_ten(deep_disk_images):
    audit = audit_family(deep_disk_images, 10)
    assert audit.polylines == sum(2 ** n for n in range(3, 11))
    assert audit.passed


@pytest.mark.slow
def test_square_family_is_disjoint_to_depth_ten(square_map):
    family = build_dyadic_cycles(OwnTrace(square_map), square_map, 10)
    audit = audit_family(FamilyImages(square_map, family))
    assert audit.passed, audit.offenders[:5]
