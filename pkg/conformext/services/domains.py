# conformext/services/domains.py

import logging
from typing import Tuple

import numpy as np

from ..exceptions import ConfigError
from ..models.conformal_map import ConformalMap
from ..models.domain import JordanDomain
from ..models.run_config import DOMAIN_KEYWORDS
from ..utils.parsing import read_domain_file
from .conformal import disk_to_square_map, identity_map, solve_schwarz_christoffel
from .geometry import build_polygon_domain

logger = logging.getLogger(__name__)

DISK_POLYGON_SIDES = 64


def load_domain(name: str, basepoint: complex = 0j) -> Tuple[JordanDomain, ConformalMap]:
    """Domain and its Riemann map normalized at `basepoint`.

    Keywords: `disk` (identity map, 64-gon for grid work) and `square` (closed-form map). Files
    hold polygon vertices and get a Schwarz-Christoffel solve.
    """
    if name in DOMAIN_KEYWORDS:
        if basepoint != 0:
            raise ConfigError(f"the {name} keyword domain is centered at 0; got basepoint {basepoint}")
        if name == "disk":
            k = np.arange(DISK_POLYGON_SIDES)
            ring = np.exp(2j * np.pi * k / DISK_POLYGON_SIDES)
            return build_polygon_domain(np.stack([ring.real, ring.imag], axis=1)), identity_map()
        cmap = disk_to_square_map()
        w = np.asarray(cmap.vertices)
        return build_polygon_domain(np.stack([w.real, w.imag], axis=1)), cmap
    vertices, hint = read_domain_file(name)
    domain = build_polygon_domain(vertices, resolution_hint=hint)
    logger.info("loaded %s with %d vertices (grid hint %.4g)", name, domain.n_vertices, domain.resolution_hint)
    return domain, solve_schwarz_christoffel(domain, basepoint)
