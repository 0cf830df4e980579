# conformext/services/layout.py

import logging
from typing import List, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from ..exceptions import GuardViolated, PointOutside, SelfIntersecting, SelfIntersection
from ..models.counterexample import FoldedLayout, SegmentPlan
from ..models.domain import JordanDomain
from ..utils.points import as_complex
from .geometry import build_polygon_domain

logger = logging.getLogger(__name__)

CAP_SEGMENTS = 32
TURN_SEGMENTS = 8
# centerline radius of a quarter turn in units of the tube half-width c_M a_m
TURN_RADIUS = 3.0

_POINT_CHUNK = 2048


class _Tube:
    """Centerline walker recording a gate (center, heading, half-width) after every step."""

    def __init__(self, a: np.ndarray, c_M: float):
        self.a = a
        self.c = c_M
        self.pos = 0j
        self.heading = 1.0 + 0j
        self.tag = 0
        self.centers: List[complex] = [0j]
        self.headings: List[complex] = [self.heading]
        self.half: List[float] = [c_M * a[1]]
        self.tags: List[int] = [0]
        self.indices: List[int] = [0]

    def _gate(self, half: float, index: int) -> None:
        self.centers.append(self.pos)
        self.headings.append(self.heading)
        self.half.append(half)
        self.tags.append(self.tag)
        self.indices.append(index)

    def run(self, start: int, stop: int) -> None:
        """Trapezoids R_start..R_{stop-1} straight ahead."""
        for k in range(start, stop):
            self.pos = self.pos + self.heading * self.a[k]
            self._gate(self.c * self.a[k + 1], k)

    def turn(self, m: int, sign: int, segments: int = TURN_SEGMENTS) -> None:
        """Quarter annulus of radii 2 c_M a_m and 4 c_M a_m; sign +1 turns left."""
        half = self.c * self.a[m]
        center = self.pos + sign * 1j * self.heading * TURN_RADIUS * half
        arm = self.pos - center
        heading = self.heading
        rot = np.exp(sign * 0.5j * np.pi * np.arange(1, segments + 1) / segments)
        rot[-1] = sign * 1j
        for r in rot:
            self.pos = center + arm * r
            self.heading = heading * r
            self._gate(half, -1)
        self.heading = complex(round(self.heading.real), round(self.heading.imag))

    def walls(self):
        centers = np.asarray(self.centers)
        normal = 1j * np.asarray(self.headings) * np.asarray(self.half)
        return centers + normal, centers - normal


def _tube_polygon(left: np.ndarray, right: np.ndarray, radius: float, cap_segments: int) -> np.ndarray:
    theta = 0.5 * np.pi + np.pi * np.arange(cap_segments + 1) / cap_segments
    cap = radius * np.exp(1j * theta)
    cap[0], cap[-1] = left[0], right[0]
    ring = np.concatenate([cap, right[1:], left[:0:-1]])
    return np.stack([ring.real, ring.imag], axis=1)


def _validated(xy: np.ndarray, hint: float) -> JordanDomain:
    try:
        return build_polygon_domain(xy, resolution_hint=hint)
    except SelfIntersecting as err:
        raise SelfIntersection(f"folded layout is not simple: {err.detail}", **err.context) from err


def unfolded_chain(a: np.ndarray, c_M: float, K: int, cap_segments: int = CAP_SEGMENTS) -> JordanDomain:
    """Half-disk cap of radius c_M a_1 followed by the straight run R_1..R_K."""
    tube = _Tube(a, c_M)
    tube.run(1, K + 1)
    left, right = tube.walls()
    return _validated(_tube_polygon(left, right, c_M * a[1], cap_segments), c_M * a[K + 1])


def _pipes(segments: Sequence[SegmentPlan]):
    for plan in segments:
        guard = plan.entry_guard
        for d, window in enumerate(plan.windows):
            yield plan.n, guard, window
            guard = plan.guards[d] if d < len(plan.guards) else 0


def fold_layout(
    a: np.ndarray,
    c_M: float,
    lead: int,
    segments: Sequence[SegmentPlan],
    cap_segments: int = CAP_SEGMENTS,
    turn_segments: int = TURN_SEGMENTS,
) -> FoldedLayout:
    """Fold the trapezoid chain into a serpentine of vertical pipes marching in +x.

    R_1..R_lead run straight out of the cap; a left quarter turn starts the first pipe. Between
    pipes a U-turn (quarter turn, guard run, quarter turn) moves to the next pipe on the right.
    """
    a = np.asarray(a, dtype=float)
    tube = _Tube(a, c_M)
    tube.run(1, lead + 1)
    lead_end = len(tube.centers) - 1

    pipe_x: List[float] = []
    pipe_start: List[int] = []
    group_ends: List[int] = []
    groups: List[int] = []
    for n, guard, (start, stop) in _pipes(segments):
        tube.tag = n
        m = start - guard
        if not pipe_x:
            tube.run(m, start)
            tube.turn(start, +1, turn_segments)
        else:
            sign = -1 if tube.heading == 1j else +1
            tube.turn(m, sign, turn_segments)
            tube.run(m, start)
            tube.turn(start, sign, turn_segments)
        pipe_x.append(tube.pos.real)
        pipe_start.append(start)
        tube.run(start, stop)
        if groups and groups[-1] == n:
            group_ends[-1] = len(tube.centers) - 1
        else:
            groups.append(n)
            group_ends.append(len(tube.centers) - 1)

    clearances = np.array([
        abs(pipe_x[p] - pipe_x[p - 1]) - c_M * (a[pipe_start[p - 1]] + a[pipe_start[p]])
        for p in range(1, len(pipe_x))
    ])
    if clearances.size and clearances.min() <= 0:
        p = int(np.argmin(clearances)) + 1
        raise GuardViolated(
            f"pipes {p - 1} and {p} overlap (clearance {clearances[p - 1]:.3g})", pipe=p,
            clearance=float(clearances[p - 1]),
        )

    left, right = tube.walls()
    tags = np.asarray(tube.tags)
    widths, heights = [], []
    for n in groups:
        cells = np.flatnonzero(tags == n)
        cells = cells[cells > 0]
        pts = np.concatenate([left[cells], right[cells], left[cells - 1], right[cells - 1]])
        widths.append(float(np.ptp(pts.real)))
        heights.append(float(np.ptp(pts.imag)))

    hint = float(np.min(tube.half)) if len(tube.half) else 0.02
    domain = _validated(_tube_polygon(left, right, c_M * a[1], cap_segments), hint)
    logger.info(
        "folded layout: %d groups, %d pipes, %d gates, %d vertices",
        len(groups), len(pipe_x), left.size, domain.n_vertices,
    )
    return FoldedLayout(
        domain=domain,
        cap_radius=c_M * a[1],
        left=left,
        right=right,
        tags=tags,
        indices=np.asarray(tube.indices),
        groups=groups,
        group_ends=group_ends,
        lead_end=lead_end,
        widths=widths,
        heights=heights,
        clearances=clearances,
    )


def point_segment_distance(z: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    d = q - p
    length2 = np.abs(d) ** 2
    t = np.clip(np.real((z - p) * np.conj(d)) / np.where(length2 > 0, length2, 1.0), 0.0, 1.0)
    return np.abs(z - (p + t * d))


def segment_distance(p1, p2, q1, q2) -> np.ndarray:
    """Distance between disjoint segments [p1, p2] and [q1, q2]."""
    return np.minimum.reduce([
        point_segment_distance(p1, q1, q2),
        point_segment_distance(p2, q1, q2),
        point_segment_distance(q1, p1, p2),
        point_segment_distance(q2, p1, p2),
    ])


class TubeDistanceOracle:
    """Internal distances from the base point of a folded layout.

    Every path to cell j crosses gates 1..j-1 in order, so summing gate-to-gate distances gives
    lower values; upper values come from shortest paths through points sampled on the gates
    (each cell is convex).
    """

    def __init__(self, layout: FoldedLayout, samples: int = 9):
        self.layout = layout
        self.base = complex(layout.base)
        left, right = layout.left, layout.right
        self.n_gates = left.size
        t = np.linspace(0.0, 1.0, samples)
        self.nodes = right[:, None] + (left - right)[:, None] * t[None, :]

        gaps = segment_distance(right[:-1], left[:-1], right[1:], left[1:])
        first = float(point_segment_distance(np.array([self.base]), right[1:2], left[1:2])[0])
        self.gate_lower = np.zeros(self.n_gates)
        self.gate_lower[1] = first
        self.gate_lower[2:] = first + np.cumsum(gaps[1:])

        s = samples
        G = self.n_gates
        cells = np.arange(1, G)
        ii, jj = np.meshgrid(np.arange(s), np.arange(s), indexing="ij")
        u = ((cells - 1)[:, None, None] * s + ii[None]).ravel()
        v = (cells[:, None, None] * s + jj[None]).ravel()
        along_u = (np.arange(G)[:, None] * s + np.arange(s - 1)[None, :]).ravel()
        base_id = G * s
        base_v = np.arange(2 * s)
        uu = np.concatenate([u, along_u, np.full(base_v.size, base_id)])
        vv = np.concatenate([v, along_u + 1, base_v])
        position = np.append(self.nodes.ravel(), self.base)
        # the base may coincide with a gate node; zero weights would read as missing edges
        weight = np.maximum(np.abs(position[uu] - position[vv]), 1e-300)
        matrix = coo_matrix((weight, (uu, vv)), shape=(base_id + 1, base_id + 1)).tocsr()
        self.node_dist = dijkstra(matrix, directed=False, indices=base_id)[:base_id].reshape(G, s)

    def locate(self, points) -> np.ndarray:
        """Cell index per point: 0 for the cap, k for the cell behind gate k, -1 outside."""
        z = as_complex(points)
        left, right = self.layout.left, self.layout.right
        corners = [right[:-1], right[1:], left[1:], left[:-1]]
        edges = [(corners[i], corners[(i + 1) % 4]) for i in range(4)]
        scale = float(np.abs(self.nodes).max())
        tol = 1e-9 * scale
        radius = self.layout.cap_radius
        out = np.full(z.size, -1, dtype=np.int64)
        in_cap = (np.abs(z - self.base) <= radius * (1.0 + 1e-9)) & (z.real <= tol)
        out[in_cap] = 0
        for lo in range(0, z.size, _POINT_CHUNK):
            chunk = z[lo:lo + _POINT_CHUNK]
            inside = np.ones((chunk.size, left.size - 1), dtype=bool)
            for p, q in edges:
                d = q - p
                side = np.imag(np.conj(d)[None, :] * (chunk[:, None] - p[None, :]))
                inside &= side >= -tol * np.maximum(np.abs(d), 1e-300)[None, :]
            hit = inside.any(axis=1)
            cell = np.argmax(inside, axis=1) + 1
            sel = hit & (out[lo:lo + _POINT_CHUNK] < 0)
            out[lo:lo + _POINT_CHUNK][sel] = cell[sel]
        return out

    def _cells(self, points):
        z = as_complex(points)
        cell = self.locate(z)
        if np.any(cell < 0):
            bad = z[cell < 0][0]
            raise PointOutside(f"point ({bad.real:.6g}, {bad.imag:.6g}) is outside the tube", point=[bad.real, bad.imag])
        return z, cell

    def lower(self, points) -> np.ndarray:
        z, cell = self._cells(points)
        out = np.abs(z - self.base)
        far = cell >= 2
        j = cell[far]
        gate = point_segment_distance(z[far], self.layout.right[j - 1], self.layout.left[j - 1])
        out[far] = np.maximum(out[far], self.gate_lower[j - 1] + gate)
        return out

    def upper(self, points) -> np.ndarray:
        z, cell = self._cells(points)
        out = np.abs(z - self.base)
        far = np.flatnonzero(cell >= 2)
        for k in far:
            j = cell[k]
            nodes = self.nodes[j - 1:j + 1].ravel()
            dist = self.node_dist[j - 1:j + 1].ravel()
            out[k] = float(np.min(dist + np.abs(nodes - z[k])))
        return out


def layout_polylines(layout: FoldedLayout) -> List[np.ndarray]:
    """Gate segments, for rendering."""
    return [np.array([r, l]) for l, r in zip(layout.left, layout.right)]
