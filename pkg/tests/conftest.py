# tests/conftest.py

import numpy as np
import pytest

from conformext.services.conformal import disk_to_square_map, identity_map
from conformext.services.counterexample import build_counterexample_plan
from conformext.services.geometry import build_polygon_domain
from conformext.services.phi import phi_alpha

UNIT_SQUARE = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]

# corridor 3 wide with a slot cut down from the top: the two arms are far apart internally
U_CORRIDOR = [[0.0, 0.0], [3.0, 0.0], [3.0, 2.0], [2.0, 2.0], [2.0, 0.5], [1.0, 0.5], [1.0, 2.0], [0.0, 2.0]]


@pytest.fixture(scope="session")
def unit_square():
    return build_polygon_domain(UNIT_SQUARE)


@pytest.fixture(scope="session")
def u_corridor():
    return build_polygon_domain(U_CORRIDOR)


@pytest.fixture(scope="session")
def disk_polygon():
    ring = np.exp(2j * np.pi * np.arange(64) / 64)
    return build_polygon_domain(np.stack([ring.real, ring.imag], axis=1))


@pytest.fixture(scope="session")
def disk_map():
    return identity_map()


@pytest.fixture(scope="session")
def square_map():
    return disk_to_square_map()


@pytest.fixture(scope="session")
def square_domain(square_map):
    w = np.asarray(square_map.vertices)
    return build_polygon_domain(np.stack([w.real, w.imag], axis=1))


@pytest.fixture(scope="session")
def alpha_one_plan():
    """Folded domain for phi(t) = t log(e + t) with four groups"""
    return build_counterexample_plan(phi_alpha(1.0), groups=4, N=100_000)


@pytest.fixture(scope="session")
def alpha_six_plan():
    """The command-line default: six groups"""
    return build_counterexample_plan(phi_alpha(1.0), groups=6, N=100_000)
