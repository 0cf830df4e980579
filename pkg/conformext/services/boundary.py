# conformext/services/boundary.py

import logging
from typing import Optional

import numpy as np

from ..exceptions import NonMonotoneParametrization
from ..models.conformal_map import ConformalMap
from ..models.domain import JordanDomain
from ..utils.points import as_xy
from .conformal import boundary_trace
from .geometry import boundary_coordinate, boundary_point_at, build_polygon_domain, perimeter

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def map_domain(cmap: ConformalMap) -> Optional[JordanDomain]:
    """Polygon of a polygonal map, None for the disk identity."""
    if not cmap.is_polygonal:
        return None
    return build_polygon_domain(as_xy(cmap.vertices))


class BoundaryParametrization:
    """Homeomorphism from the parameter circle (angles) onto the boundary of the target domain.

    Subclasses return boundary points from `__call__`. `preimage_angles` gives the angles xi with
    f(e^{i xi}) = param(theta), unwrapped to follow theta.
    """

    name = "parametrization"

    def __call__(self, theta) -> np.ndarray:
        raise NotImplementedError

    def preimage_angles(self, cmap: ConformalMap, theta: np.ndarray) -> np.ndarray:
        return TraceTable(cmap).invert(self(theta), theta)


class OwnTrace(BoundaryParametrization):
    """theta -> f(e^{i theta}): the boundary values of the map itself."""

    name = "own_trace"

    def __init__(self, cmap: ConformalMap):
        self.cmap = cmap

    def __call__(self, theta) -> np.ndarray:
        return boundary_trace(self.cmap, theta)

    def preimage_angles(self, cmap: ConformalMap, theta: np.ndarray) -> np.ndarray:
        if cmap is self.cmap:
            return np.asarray(theta, dtype=float).copy()
        return super().preimage_angles(cmap, theta)


class PolygonArcLength(BoundaryParametrization):
    """theta -> the boundary point at arc length theta / (2 pi) * perimeter from `start`."""

    name = "arc_length"

    def __init__(self, domain: JordanDomain, start: float = 0.0):
        self.domain = domain
        self.start = start
        self.length = perimeter(domain)

    def __call__(self, theta) -> np.ndarray:
        s = self.start + np.asarray(theta, dtype=float) / TWO_PI * self.length
        return boundary_point_at(self.domain, s)


class Reparametrized(BoundaryParametrization):
    """theta -> base(g(theta)) for a monotone circle map g given by a knot table.

    g is linear between knots; `knots` are (theta, g(theta)) pairs spanning one turn with
    g(theta_last) - g(theta_first) equal to the span of theta.
    """

    name = "reparametrized"

    def __init__(self, base: BoundaryParametrization, knots: np.ndarray):
        knots = np.asarray(knots, dtype=float)
        if np.any(np.diff(knots[:, 0]) <= 0) or np.any(np.diff(knots[:, 1]) <= 0):
            raise NonMonotoneParametrization("circle map table must be strictly increasing")
        if abs((knots[-1, 1] - knots[0, 1]) - (knots[-1, 0] - knots[0, 0])) > 1e-9:
            raise NonMonotoneParametrization("circle map table must wind exactly once")
        self.base = base
        self.knots = knots

    def circle_map(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        t0, span = self.knots[0, 0], self.knots[-1, 0] - self.knots[0, 0]
        turns = np.floor((theta - t0) / span)
        local = theta - turns * span
        return np.interp(local, self.knots[:, 0], self.knots[:, 1]) + turns * span

    def __call__(self, theta) -> np.ndarray:
        return self.base(self.circle_map(theta))

    def preimage_angles(self, cmap: ConformalMap, theta: np.ndarray) -> np.ndarray:
        if isinstance(self.base, OwnTrace) and self.base.cmap is cmap:
            return self.circle_map(theta)
        return super().preimage_angles(cmap, theta)


class CircleMapTrace(Reparametrized):
    """theta -> f(e^{i g(theta)})"""

    name = "circle_map"

    def __init__(self, cmap: ConformalMap, knots: np.ndarray):
        super().__init__(OwnTrace(cmap), knots)
        self.cmap = cmap


class TraceTable:
    """Monotone table theta_k -> boundary coordinate of f(e^{i theta_k}), inverted by interpolation."""

    def __init__(self, cmap: ConformalMap, size: int = 4096):
        self.cmap = cmap
        self.domain = map_domain(cmap)
        self.theta = np.arange(size + 1) * (TWO_PI / size)
        coords = self.coordinate(boundary_trace(cmap, self.theta[:-1]))
        period = self.period
        rel = np.mod(coords - coords[0], period)
        rel = np.append(rel, period)
        if np.any(np.diff(rel) <= 0):
            k = int(np.argmax(np.diff(rel) <= 0))
            raise NonMonotoneParametrization(
                f"boundary trace is not monotone near theta={self.theta[k]:.6g}", theta=float(self.theta[k])
            )
        self.base = coords[0]
        self.rel = rel

    @property
    def period(self) -> float:
        return TWO_PI if self.domain is None else perimeter(self.domain)

    def coordinate(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        if self.domain is None:
            return np.mod(np.angle(w), TWO_PI)
        return boundary_coordinate(self.domain, w)

    def invert(self, w, theta: np.ndarray) -> np.ndarray:
        """Angles xi with f(e^{i xi}) = w, unwrapped so that xi follows the order of theta."""
        rel = np.mod(self.coordinate(w) - self.base, self.period)
        xi = np.interp(rel, self.rel, self.theta)
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        xi = np.atleast_1d(xi)
        start = xi[0] + TWO_PI * np.round((theta[0] - xi[0]) / TWO_PI)
        steps = np.mod(np.diff(xi), TWO_PI)
        lifted = start + np.concatenate([[0.0], np.cumsum(steps)])
        if np.any(steps <= 0) or lifted[-1] - lifted[0] >= TWO_PI:
            raise NonMonotoneParametrization("parametrization reverses orientation against the map")
        return lifted
