# conformext/services/geometry.py

import logging
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from ..exceptions import (
    DegenerateEdge,
    DisconnectedAtResolution,
    PointOutside,
    SelfIntersecting,
    TooFewVertices,
)
from ..models.domain import GridGraph, JordanDomain
from ..utils.points import as_complex, as_xy, cross2, is_single_point

logger = logging.getLogger(__name__)

# sec(pi/8): worst-case length inflation of 8-neighbor grid paths
METRICATION_FACTOR = 1.0824

_ROW_CHUNK = 256
_POINT_CHUNK = 4096


def _scale(xy: np.ndarray) -> float:
    span = xy.max(axis=0) - xy.min(axis=0)
    return float(max(span.max(), 1e-300))


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _orient(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return cross2(b - a, c - a)


def _on_segment(a: np.ndarray, b: np.ndarray, p: np.ndarray, eps: float) -> np.ndarray:
    lo = np.minimum(a, b) - eps
    hi = np.maximum(a, b) + eps
    return np.all((p >= lo) & (p <= hi), axis=-1)


def segments_intersect(p1, p2, q1, q2, eps: float) -> np.ndarray:
    """Closed-segment intersection test, broadcast over leading dimensions."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    area_eps = eps * eps
    proper = (((d1 > area_eps) & (d2 < -area_eps)) | ((d1 < -area_eps) & (d2 > area_eps))) & (
        ((d3 > area_eps) & (d4 < -area_eps)) | ((d3 < -area_eps) & (d4 > area_eps))
    )
    touch = (
        ((np.abs(d1) <= area_eps) & _on_segment(q1, q2, p1, eps))
        | ((np.abs(d2) <= area_eps) & _on_segment(q1, q2, p2, eps))
        | ((np.abs(d3) <= area_eps) & _on_segment(p1, p2, q1, eps))
        | ((np.abs(d4) <= area_eps) & _on_segment(p1, p2, q2, eps))
    )
    return proper | touch


def _first_self_intersection(vertices: np.ndarray) -> Optional[Tuple[int, int]]:
    n = vertices.shape[0]
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    eps = 1e-12 * _scale(vertices)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)

    # Adjacent edges may only share their common vertex.
    d_cur = b - a
    d_next = np.roll(d_cur, -1, axis=0)
    backtrack = (np.abs(cross2(d_cur, d_next)) <= eps * eps) & (np.sum(d_cur * d_next, axis=1) < 0)
    if backtrack.any():
        i = int(np.argmax(backtrack))
        return i, (i + 1) % n

    idx = np.arange(n)
    for start in range(0, n, _ROW_CHUNK):
        rows = idx[start:start + _ROW_CHUNK]
        # bounding-box prefilter
        overlap = np.all(
            (lo[rows, None, :] <= hi[None, :, :] + eps) & (lo[None, :, :] <= hi[rows, None, :] + eps),
            axis=2,
        )
        gap = (idx[None, :] - rows[:, None]) % n
        overlap &= (gap > 1) & (gap < n - 1)
        overlap &= idx[None, :] > rows[:, None]
        ri, cj = np.nonzero(overlap)
        if ri.size == 0:
            continue
        i_idx = rows[ri]
        hit = segments_intersect(a[i_idx], b[i_idx], a[cj], b[cj], eps)
        if hit.any():
            k = int(np.argmax(hit))
            return int(i_idx[k]), int(cj[k])
    return None


def build_polygon_domain(vertices: Any, resolution_hint: Optional[float] = None) -> JordanDomain:
    """Validate a polygonal Jordan curve and normalize it to counterclockwise order."""
    pts = as_xy(vertices).copy()
    if pts.shape[0] >= 2 and np.allclose(pts[0], pts[-1], rtol=0.0, atol=1e-14 * _scale(pts)):
        pts = pts[:-1]
    if pts.shape[0] < 3:
        raise TooFewVertices(f"a polygon needs at least 3 vertices, got {pts.shape[0]}", count=int(pts.shape[0]))

    scale = _scale(pts)
    lengths = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    if np.any(lengths <= 1e-14 * scale):
        k = int(np.argmin(lengths))
        raise DegenerateEdge(f"edge {k} has zero length", edge=k)

    crossing = _first_self_intersection(pts)
    if crossing is not None:
        raise SelfIntersecting(f"edges {crossing[0]} and {crossing[1]} intersect", edges=list(crossing))

    area = signed_area(pts)
    if abs(area) <= 1e-14 * scale * scale:
        raise SelfIntersecting("polygon encloses zero area", area=area)
    if area < 0:
        pts = pts[::-1].copy()

    hint = resolution_hint if resolution_hint is not None else scale / 50.0
    return JordanDomain(vertices=pts, resolution_hint=hint)


def polygon_area(domain: JordanDomain) -> float:
    return signed_area(domain.vertices)


def perimeter(domain: JordanDomain) -> float:
    a, b = domain.edges
    return float(np.linalg.norm(b - a, axis=1).sum())


def contains(domain: JordanDomain, points: Any) -> np.ndarray:
    """Crossing-number membership for the open domain (boundary points may go either way)."""
    xy = as_xy(points)
    a, b = domain.edges
    x1, y1 = a[:, 0][None, :], a[:, 1][None, :]
    x2, y2 = b[:, 0][None, :], b[:, 1][None, :]
    out = np.empty(xy.shape[0], dtype=bool)
    for start in range(0, xy.shape[0], _POINT_CHUNK):
        chunk = xy[start:start + _POINT_CHUNK]
        x = chunk[:, 0][:, None]
        y = chunk[:, 1][:, None]
        straddle = (y1 > y) != (y2 > y)
        dy = np.where(straddle, y2 - y1, 1.0)
        x_cross = x1 + (y - y1) * (x2 - x1) / dy
        crossings = straddle & (x < x_cross)
        out[start:start + _POINT_CHUNK] = (crossings.sum(axis=1) % 2) == 1
    return out


def boundary_distance(vertices: np.ndarray, points: Any) -> np.ndarray:
    """Euclidean distance to the polygon boundary, no membership check."""
    xy = as_xy(points)
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    d = b - a
    dd = np.maximum(np.sum(d * d, axis=1), 1e-300)
    out = np.empty(xy.shape[0])
    for start in range(0, xy.shape[0], _POINT_CHUNK):
        chunk = xy[start:start + _POINT_CHUNK]
        rel = chunk[:, None, :] - a[None, :, :]
        t = np.clip(np.sum(rel * d[None, :, :], axis=2) / dd[None, :], 0.0, 1.0)
        proj = a[None, :, :] + t[..., None] * d[None, :, :]
        out[start:start + _POINT_CHUNK] = np.sqrt(np.min(np.sum((chunk[:, None, :] - proj) ** 2, axis=2), axis=1))
    return out


def distance_to_boundary(domain: JordanDomain, z: Any):
    """Exact distance from interior point(s) to the polygon; scalar in, scalar out."""
    xy = as_xy(z)
    inside = contains(domain, xy)
    if not inside.all():
        bad = xy[~inside][0]
        raise PointOutside(f"point ({bad[0]:.6g}, {bad[1]:.6g}) is not inside the domain", point=bad.tolist())
    dist = boundary_distance(domain.vertices, xy)
    return float(dist[0]) if is_single_point(z) else dist


def in_closure(domain: JordanDomain, points: Any, tol: Optional[float] = None) -> np.ndarray:
    xy = as_xy(points)
    tol = 1e-9 * _scale(domain.vertices) if tol is None else tol
    return contains(domain, xy) | (boundary_distance(domain.vertices, xy) <= tol)


# Boundary parametrization by arc length

def _cumulative_lengths(domain: JordanDomain) -> Tuple[np.ndarray, np.ndarray]:
    a, b = domain.edges
    lengths = np.linalg.norm(b - a, axis=1)
    return np.concatenate([[0.0], np.cumsum(lengths)]), lengths


def boundary_point_at(domain: JordanDomain, s: Any) -> np.ndarray:
    """Complex boundary point(s) at arc length s (taken modulo the perimeter) from vertex 0."""
    cum, lengths = _cumulative_lengths(domain)
    total = cum[-1]
    s = np.mod(np.asarray(s, dtype=float), total)
    k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, lengths.size - 1)
    t = (s - cum[k]) / lengths[k]
    zv = domain.complex_vertices
    return zv[k] + t * (np.roll(zv, -1)[k] - zv[k])


def boundary_coordinate(domain: JordanDomain, w: Any) -> np.ndarray:
    """Arc-length coordinate of the nearest boundary point to each w."""
    xy = as_xy(w)
    a, b = domain.edges
    d = b - a
    dd = np.sum(d * d, axis=1)
    cum, _ = _cumulative_lengths(domain)
    out = np.empty(xy.shape[0])
    for start in range(0, xy.shape[0], _POINT_CHUNK):
        chunk = xy[start:start + _POINT_CHUNK]
        rel = chunk[:, None, :] - a[None, :, :]
        t = np.clip(np.sum(rel * d[None, :, :], axis=2) / dd[None, :], 0.0, 1.0)
        proj = a[None, :, :] + t[..., None] * d[None, :, :]
        k = np.argmin(np.sum((chunk[:, None, :] - proj) ** 2, axis=2), axis=1)
        rows = np.arange(chunk.shape[0])
        out[start:start + _POINT_CHUNK] = cum[k] + t[rows, k] * np.sqrt(dd[k])
    return np.mod(out, cum[-1])


def van_der_corput(count: int) -> np.ndarray:
    """Base-2 radical inverse of 0..count-1; every prefix is well spread in [0, 1)."""
    out = np.zeros(count)
    for i in range(count):
        n, denom, value = i, 1.0, 0.0
        while n:
            denom *= 2.0
            n, bit = divmod(n, 2)
            value += bit / denom
        out[i] = value
    return out


def sample_boundary(domain: JordanDomain, count: int) -> np.ndarray:
    """Nested boundary samples: the first k samples are the same for every count >= k."""
    return boundary_point_at(domain, van_der_corput(count) * perimeter(domain))


# Grid graph

def _segment_clear(domain: JordanDomain, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """For segments p[i] -> q[i], True when no boundary edge is met after the start point."""
    a, b = domain.edges
    s = b - a
    r = q - p
    scale = _scale(domain.vertices)
    tol = 1e-9
    out = np.ones(p.shape[0], dtype=bool)
    for start in range(0, p.shape[0], _ROW_CHUNK):
        pp = p[start:start + _ROW_CHUNK]
        rr = r[start:start + _ROW_CHUNK]
        denom = cross2(rr[:, None, :], s[None, :, :])
        ap = a[None, :, :] - pp[:, None, :]
        safe = np.where(np.abs(denom) > 1e-300, denom, 1.0)
        t = cross2(ap, s[None, :, :]) / safe
        u = cross2(ap, rr[:, None, :]) / safe
        regular = np.abs(denom) > 1e-14 * scale * scale
        hit = regular & (t > tol) & (t <= 1.0 + tol) & (u >= -tol) & (u <= 1.0 + tol)
        # collinear overlap beyond the start point
        colinear = ~regular & (np.abs(cross2(ap, rr[:, None, :])) <= 1e-14 * scale * scale)
        if colinear.any():
            rr2 = np.maximum(np.sum(rr * rr, axis=1), 1e-300)[:, None]
            t0 = np.sum(ap * rr[:, None, :], axis=2) / rr2
            t1 = np.sum((ap + s[None, :, :]) * rr[:, None, :], axis=2) / rr2
            lo = np.minimum(t0, t1)
            hi = np.maximum(t0, t1)
            hit |= colinear & (hi > tol) & (lo <= 1.0)
        out[start:start + _ROW_CHUNK] = ~hit.any(axis=1)
    mid = 0.5 * (p + q)
    return out & contains(domain, mid)


def build_grid_graph(domain: JordanDomain, pitch: float) -> GridGraph:
    """Origin-aligned grid nodes strictly inside the domain with 8-neighbor edges."""
    if pitch <= 0:
        raise ValueError("pitch must be positive")
    xmin, ymin, xmax, ymax = domain.bbox
    ii = np.arange(int(np.ceil(xmin / pitch)), int(np.floor(xmax / pitch)) + 1)
    jj = np.arange(int(np.ceil(ymin / pitch)), int(np.floor(ymax / pitch)) + 1)
    gx, gy = np.meshgrid(ii * pitch, jj * pitch, indexing="ij")
    cand = np.stack([gx.ravel(), gy.ravel()], axis=1)
    inside = contains(domain, cand)
    dist = np.zeros(cand.shape[0])
    dist[inside] = boundary_distance(domain.vertices, cand[inside])
    inside &= dist > 1e-12 * _scale(domain.vertices)

    index = -np.ones(cand.shape[0], dtype=np.int64)
    index[inside] = np.arange(int(inside.sum()))
    index = index.reshape(gx.shape)
    nodes = cand[inside]
    node_dist = dist[inside]

    us: List[np.ndarray] = []
    vs: List[np.ndarray] = []
    ls: List[np.ndarray] = []
    nx, ny = gx.shape
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        i0, i1 = 0, nx - di
        j0, j1 = max(0, -dj), ny - max(0, dj)
        if i1 <= i0 or j1 <= j0:
            continue
        u = index[i0:i1, j0:j1]
        v = index[i0 + di:i1 + di, j0 + dj:j1 + dj]
        keep = (u >= 0) & (v >= 0)
        u = u[keep]
        v = v[keep]
        length = pitch * float(np.hypot(di, dj))
        covered = np.maximum(node_dist[u], node_dist[v]) >= length
        if not covered.all():
            check = ~covered
            clear = _segment_clear(domain, nodes[u[check]], nodes[v[check]])
            covered[check] = clear
        us.append(u[covered])
        vs.append(v[covered])
        ls.append(np.full(int(covered.sum()), length))

    edge_u = np.concatenate(us) if us else np.zeros(0, dtype=np.int64)
    edge_v = np.concatenate(vs) if vs else np.zeros(0, dtype=np.int64)
    edge_l = np.concatenate(ls) if ls else np.zeros(0)
    logger.debug("grid pitch=%g nodes=%d edges=%d", pitch, nodes.shape[0], edge_u.size)
    return GridGraph(
        pitch=pitch,
        nodes=nodes,
        edge_u=edge_u,
        edge_v=edge_v,
        edge_lengths=edge_l,
        node_weights=1.0 / node_dist,
        n_grid=int(nodes.shape[0]),
    )


def attach_points(domain: JordanDomain, graph: GridGraph, points: np.ndarray, radius_factor: float = 2.0):
    """Connect extra points to the grid nodes they see within radius_factor * pitch."""
    pitch = graph.pitch
    nodes = graph.nodes
    extra_u: List[np.ndarray] = []
    extra_v: List[np.ndarray] = []
    extra_l: List[np.ndarray] = []
    base = graph.n_nodes
    radius = radius_factor * pitch
    for k, p in enumerate(points):
        near = np.nonzero(np.sum((nodes - p) ** 2, axis=1) <= radius * radius + 1e-18)[0]
        if near.size:
            clear = _segment_clear(domain, np.repeat(p[None, :], near.size, axis=0), nodes[near])
            near = near[clear]
        if near.size == 0:
            raise DisconnectedAtResolution(
                f"point ({p[0]:.6g}, {p[1]:.6g}) sees no grid node at pitch {pitch:g}",
                point=p.tolist(),
                pitch=pitch,
            )
        extra_u.append(np.full(near.size, base + k))
        extra_v.append(near)
        extra_l.append(np.linalg.norm(nodes[near] - p, axis=1))
    # direct links between nearby attached points
    for i in range(points.shape[0]):
        for j in range(i + 1, points.shape[0]):
            gap = float(np.linalg.norm(points[i] - points[j]))
            if 0.0 < gap <= radius and _segment_clear(domain, points[i][None, :], points[j][None, :])[0]:
                extra_u.append(np.array([base + i]))
                extra_v.append(np.array([base + j]))
                extra_l.append(np.array([gap]))
    return np.concatenate(extra_u), np.concatenate(extra_v), np.concatenate(extra_l)


def _closure_points(domain: JordanDomain, points: Any) -> np.ndarray:
    xy = as_xy(points)
    ok = in_closure(domain, xy)
    if not ok.all():
        bad = xy[~ok][0]
        raise PointOutside(f"point ({bad[0]:.6g}, {bad[1]:.6g}) is outside the closed domain", point=bad.tolist())
    return xy


def graph_matrix(graph: GridGraph, extra, n_extra: int, density: Optional[np.ndarray] = None):
    """Sparse edge-weight matrix over grid nodes plus attached points.

    With `density` (one value per node, attached points included) each edge weighs
    length * mean(density at its ends); otherwise plain Euclidean length.
    """
    u = np.concatenate([graph.edge_u, extra[0]]).astype(np.int64)
    v = np.concatenate([graph.edge_v, extra[1]]).astype(np.int64)
    w = np.concatenate([graph.edge_lengths, extra[2]])
    if density is not None:
        w = w * 0.5 * (density[u] + density[v])
    n = graph.n_nodes + n_extra
    # explicit zero weights would read as missing edges
    w = np.maximum(w, 1e-15 * graph.pitch)
    return coo_matrix((w, (u, v)), shape=(n, n)).tocsr()


def internal_distance(domain: JordanDomain, x: Any, y: Any, pitch: float) -> float:
    """Grid shortest-path approximation of d_I(x, y); converges from above as pitch -> 0."""
    pts = np.vstack([_closure_points(domain, x), _closure_points(domain, y)])
    if np.array_equal(pts[0], pts[1]):
        return 0.0
    # canonical order keeps the result bit-symmetric in (x, y)
    if tuple(pts[1]) < tuple(pts[0]):
        pts = pts[::-1].copy()
    graph = build_grid_graph(domain, pitch)
    extra = attach_points(domain, graph, pts)
    matrix = graph_matrix(graph, extra, 2)
    src, dst = graph.n_nodes, graph.n_nodes + 1
    dist = dijkstra(matrix, directed=False, indices=src)
    value = float(dist[dst])
    if not np.isfinite(value):
        raise DisconnectedAtResolution(f"points are not connected at pitch {pitch:g}", pitch=pitch)
    return value


def internal_diameter(domain: JordanDomain, pitch: float, boundary_samples: int) -> Tuple[float, Tuple[complex, complex]]:
    """Largest grid internal distance over nested boundary samples, with the maximizing pair."""
    if boundary_samples < 2:
        raise ValueError("boundary_samples must be at least 2")
    samples = sample_boundary(domain, boundary_samples)
    pts = as_xy(samples)
    graph = build_grid_graph(domain, pitch)
    extra = attach_points(domain, graph, pts)
    matrix = graph_matrix(graph, extra, pts.shape[0])
    ids = graph.n_nodes + np.arange(pts.shape[0])
    table = dijkstra(matrix, directed=False, indices=ids)[:, ids]
    if not np.all(np.isfinite(table)):
        raise DisconnectedAtResolution(f"boundary samples are not connected at pitch {pitch:g}", pitch=pitch)
    i, j = np.unravel_index(int(np.argmax(table)), table.shape)
    logger.info("internal diameter %.6g at pitch %g over %d samples", table[i, j], pitch, boundary_samples)
    return float(table[i, j]), (complex(samples[i]), complex(samples[j]))


class GridDistanceOracle:
    """Grid internal distances from a fixed base point, queried at arbitrary closure points."""

    def __init__(self, domain: JordanDomain, base: Any, pitch: float):
        self.domain = domain
        self.pitch = pitch
        base_xy = _closure_points(domain, base)
        self.base = complex(base_xy[0, 0], base_xy[0, 1])
        self.graph = build_grid_graph(domain, pitch)
        extra = attach_points(domain, self.graph, base_xy)
        matrix = graph_matrix(self.graph, extra, 1)
        self._dist = dijkstra(matrix, directed=False, indices=self.graph.n_nodes)[: self.graph.n_nodes]

    def upper(self, points: Any) -> np.ndarray:
        xy = _closure_points(self.domain, points)
        nodes = self.graph.nodes
        radius = 2.0 * self.pitch
        base_xy = np.array([self.base.real, self.base.imag])
        out = np.empty(xy.shape[0])
        for k, p in enumerate(xy):
            best = np.inf
            gap = float(np.linalg.norm(p - base_xy))
            if gap <= radius and _segment_clear(self.domain, base_xy[None, :], p[None, :])[0]:
                best = gap
            near = np.nonzero(np.sum((nodes - p) ** 2, axis=1) <= radius * radius + 1e-18)[0]
            if near.size:
                clear = _segment_clear(self.domain, np.repeat(p[None, :], near.size, axis=0), nodes[near])
                near = near[clear]
            if near.size:
                best = min(best, float(np.min(self._dist[near] + np.linalg.norm(nodes[near] - p, axis=1))))
            if not np.isfinite(best):
                raise DisconnectedAtResolution(f"query point ({p[0]:.6g}, {p[1]:.6g}) is not reachable", pitch=self.pitch)
            out[k] = best
        return out

    def lower(self, points: Any) -> np.ndarray:
        return np.maximum(self.upper(points) / METRICATION_FACTOR - 2.0 * self.pitch, 0.0)


# Polyline audits

def count_polyline_crossings(
    polylines: Sequence[np.ndarray],
    cell: Optional[float] = None,
) -> Tuple[int, List[Tuple[int, int]]]:
    """Count contacts between segments of different polylines (or non-adjacent segments of one).

    Proper crossings, touching points and collinear overlaps all count; the one exception is two
    polylines meeting at a common end vertex without overlapping there. A uniform spatial hash
    limits candidate pairs.
    """
    seg_a: List[np.ndarray] = []
    seg_b: List[np.ndarray] = []
    owner: List[np.ndarray] = []
    position: List[np.ndarray] = []
    final: List[np.ndarray] = []
    for idx, line in enumerate(polylines):
        z = as_complex(line)
        if z.size < 2:
            continue
        seg_a.append(z[:-1])
        seg_b.append(z[1:])
        owner.append(np.full(z.size - 1, idx))
        position.append(np.arange(z.size - 1))
        final.append(np.full(z.size - 1, z.size - 2))
    if not seg_a:
        return 0, []
    a = np.concatenate(seg_a)
    b = np.concatenate(seg_b)
    own = np.concatenate(owner)
    pos = np.concatenate(position)
    last = np.concatenate(final)
    lo_x, hi_x = np.minimum(a.real, b.real), np.maximum(a.real, b.real)
    lo_y, hi_y = np.minimum(a.imag, b.imag), np.maximum(a.imag, b.imag)
    span = max(hi_x.max() - lo_x.min(), hi_y.max() - lo_y.min(), 1e-300)
    cell = span / 128.0 if cell is None else cell
    x0, y0 = lo_x.min(), lo_y.min()

    ci0 = np.floor((lo_x - x0) / cell).astype(np.int64)
    ci1 = np.floor((hi_x - x0) / cell).astype(np.int64)
    cj0 = np.floor((lo_y - y0) / cell).astype(np.int64)
    cj1 = np.floor((hi_y - y0) / cell).astype(np.int64)
    counts = (ci1 - ci0 + 1) * (cj1 - cj0 + 1)
    seg_ids = np.repeat(np.arange(a.size), counts)
    offsets = np.arange(seg_ids.size) - np.repeat(np.cumsum(counts) - counts, counts)
    widths = np.repeat(ci1 - ci0 + 1, counts)
    cell_i = np.repeat(ci0, counts) + offsets % widths
    cell_j = np.repeat(cj0, counts) + offsets // widths
    key = cell_i * (int(cj1.max()) + 2) + cell_j
    order = np.lexsort((seg_ids, key))
    key = key[order]
    seg_ids = seg_ids[order]
    boundaries = np.flatnonzero(np.diff(key)) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [key.size]])

    pairs_i: List[np.ndarray] = []
    pairs_j: List[np.ndarray] = []
    for s, e in zip(starts, ends):
        m = e - s
        if m < 2:
            continue
        members = seg_ids[s:e]
        ii, jj = np.triu_indices(m, k=1)
        pairs_i.append(members[ii])
        pairs_j.append(members[jj])
    if not pairs_i:
        return 0, []
    pi = np.concatenate(pairs_i)
    pj = np.concatenate(pairs_j)
    pair_key = np.unique(np.minimum(pi, pj) * a.size + np.maximum(pi, pj))
    pi, pj = pair_key // a.size, pair_key % a.size
    same = own[pi] == own[pj]
    adjacent = same & (np.abs(pos[pi] - pos[pj]) <= 1)
    pi, pj = pi[~adjacent], pj[~adjacent]

    def xy(z):
        return np.stack([z.real, z.imag], axis=-1)

    p1, p2, q1, q2 = xy(a[pi]), xy(b[pi]), xy(a[pj]), xy(b[pj])
    eps = 1e-12 * span
    hit = segments_intersect(p1, p2, q1, q2, eps)

    def meet(u, v):
        return np.abs(u - v) <= eps

    start_i, end_i = pos[pi] == 0, pos[pi] == last[pi]
    start_j, end_j = pos[pj] == 0, pos[pj] == last[pj]
    shared = (
        (start_i & start_j & meet(a[pi], a[pj]))
        | (start_i & end_j & meet(a[pi], b[pj]))
        | (end_i & start_j & meet(b[pi], a[pj]))
        | (end_i & end_j & meet(b[pi], b[pj]))
    )
    area_eps = eps * eps
    collinear = (np.abs(_orient(q1, q2, p1)) <= area_eps) & (np.abs(_orient(q1, q2, p2)) <= area_eps)
    hits = np.nonzero(hit & ~(shared & ~collinear))[0]
    offenders = sorted({(int(min(own[pi[k]], own[pj[k]])), int(max(own[pi[k]], own[pj[k]]))) for k in hits})
    return int(hits.size), offenders
