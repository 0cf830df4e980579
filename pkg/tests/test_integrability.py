# tests/test_integrability.py

import numpy as np
import pytest

from conformext.models.integral_report import IntegralVerdict
from conformext.services.integrability import (
    classify_contributions,
    disk_phi_integral,
    phi_hyperbolic_area_integral,
    radial_phi_integral,
)
from conformext.services.phi import phi_alpha, phi_table


def test_radial_integral_of_the_identity_gauge():
    # phi(t) = t: integral of u e^-u
    spec = phi_table([[0.0, 0.0], [1.0, 1.0]], "power", 1.0)
    assert radial_phi_integral(spec) == pytest.approx(1.0, rel=1e-8)


def test_disk_integral_matches_the_annulus_sum(disk_map):
    spec = phi_alpha(1.0)
    report = phi_hyperbolic_area_integral(disk_map, spec)
    assert report.verdict == IntegralVerdict.FINITE
    assert report.exit_code == 0
    assert report.value == pytest.approx(disk_phi_integral(spec), rel=1e-3)
    assert np.all(np.diff(report.partials) > 0)


def test_square_integral_is_finite(square_map):
    report = phi_hyperbolic_area_integral(square_map, phi_alpha(1.0), radial_levels=16, angular_nodes=128)
    assert report.verdict == IntegralVerdict.FINITE
    assert len(report.annulus_rows()) == 16


def test_contribution_classifier():
    assert classify_contributions(0.5 ** np.arange(8)) == IntegralVerdict.FINITE
    assert classify_contributions(np.ones(8)) == IntegralVerdict.DIVERGENCE_SUSPECTED
    assert classify_contributions(np.ones(3)) == IntegralVerdict.INCONCLUSIVE
