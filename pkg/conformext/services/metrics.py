# conformext/services/metrics.py

import logging
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import dijkstra

from ..config import settings
from ..exceptions import DisconnectedAtResolution, OutsideDisk, PointOutside
from ..models.conformal_map import ConformalMap
from ..models.domain import GridDistance, JordanDomain
from ..models.metrics import ComparabilityReport, GehringHaymanReport, MetricSample
from ..utils.points import as_xy, is_single_point
from .conformal import boundary_trace, evaluate_map, hyperbolic_geodesic_disk, preimage
from .geometry import (
    attach_points,
    boundary_distance,
    build_grid_graph,
    contains,
    graph_matrix,
    internal_distance,
)

logger = logging.getLogger(__name__)


def hyperbolic_distance_disk(z1, z2):
    """2 artanh(|z1 - z2| / |1 - conj(z1) z2|), vectorized"""
    a = np.asarray(z1, dtype=complex)
    b = np.asarray(z2, dtype=complex)
    if np.any(np.abs(a) >= 1.0) or np.any(np.abs(b) >= 1.0):
        raise OutsideDisk("hyperbolic distance needs points in the open unit disk")
    ratio = np.abs(a - b) / np.abs(1.0 - np.conj(a) * b)
    value = 2.0 * np.arctanh(np.minimum(ratio, 1.0))
    return float(value) if value.ndim == 0 else value


def disk_radial_h(r):
    """h_D(0, r) = log((1 + r) / (1 - r))"""
    r = np.asarray(r, dtype=float)
    return np.log1p(r) - np.log1p(-r)


def disk_radial_k(r):
    """k_D(0, r) = log(1 / (1 - r))"""
    return -np.log1p(-np.asarray(r, dtype=float))


def hyperbolic_distance(cmap: ConformalMap, w1, w2, tol: float = 1e-9):
    """h_Omega(w1, w2) pulled back to the disk through numerical preimages."""
    z1 = preimage(cmap, w1, tol=tol)
    z2 = preimage(cmap, w2, tol=tol)
    return hyperbolic_distance_disk(z1, z2)


def quasi_hyperbolic_table(domain: JordanDomain, points, pitch: float) -> np.ndarray:
    """Pairwise grid quasi-hyperbolic distances between interior points (one shared graph)."""
    xy = as_xy(points)
    inside = contains(domain, xy)
    if not inside.all():
        bad = xy[~inside][0]
        raise PointOutside(f"point ({bad[0]:.6g}, {bad[1]:.6g}) is not inside the domain", point=bad.tolist())
    graph = build_grid_graph(domain, pitch)
    extra = attach_points(domain, graph, xy)
    density = np.concatenate([graph.node_weights, 1.0 / boundary_distance(domain.vertices, xy)])
    matrix = graph_matrix(graph, extra, xy.shape[0], density=density)
    ids = graph.n_nodes + np.arange(xy.shape[0])
    table = dijkstra(matrix, directed=False, indices=ids)[:, ids]
    if not np.all(np.isfinite(table)):
        raise DisconnectedAtResolution(f"points are not connected at pitch {pitch:g}", pitch=pitch)
    return 0.5 * (table + table.T)


def quasi_hyperbolic_distance(domain: JordanDomain, z1, z2, pitch: float) -> GridDistance:
    """k_Omega(z1, z2) as a shortest path with trapezoidal edge weights on the 8-neighbor grid."""
    pts = np.vstack([as_xy(z1), as_xy(z2)])
    if np.array_equal(pts[0], pts[1]):
        return GridDistance(value=0.0, pitch=pitch, nodes=0)
    if tuple(pts[1]) < tuple(pts[0]):
        pts = pts[::-1].copy()
    table = quasi_hyperbolic_table(domain, pts, pitch)
    return GridDistance(value=float(table[0, 1]), pitch=pitch, nodes=int(build_grid_graph(domain, pitch).n_nodes))


def comparability_report(
    cmap: ConformalMap,
    domain: JordanDomain,
    samples: int,
    pitch: Optional[float] = None,
    seed: Optional[int] = None,
    max_radius: float = 0.9,
) -> ComparabilityReport:
    """h/k over random interior pairs drawn as images of disk points."""
    pitch = settings.default_pitch if pitch is None else pitch
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    needed = 2 * samples
    z = np.zeros(0, dtype=complex)
    w = np.zeros(0, dtype=complex)
    for _ in range(20):
        batch = max_radius * np.sqrt(rng.random(2 * needed)) * np.exp(2j * np.pi * rng.random(2 * needed))
        images = evaluate_map(cmap, batch)
        xy = as_xy(images)
        ok = contains(domain, xy)
        ok[ok] = boundary_distance(domain.vertices, xy[ok]) > 2.0 * pitch
        z = np.concatenate([z, batch[ok]])
        w = np.concatenate([w, images[ok]])
        if z.size >= needed:
            break
    z, w = z[:needed], w[:needed]
    pairs = z.size // 2
    h = hyperbolic_distance_disk(z[0:2 * pairs:2], z[1:2 * pairs:2])
    k_table = quasi_hyperbolic_table(domain, w, pitch)
    rows = []
    excluded = 0
    for i in range(pairs):
        k = float(k_table[2 * i, 2 * i + 1])
        if k == 0.0 or h[i] == 0.0:
            excluded += 1
            continue
        rows.append(MetricSample(z1=w[2 * i], z2=w[2 * i + 1], h=float(h[i]), k=k, pitch=pitch))
    ratios = np.array([r.ratio for r in rows])
    report = ComparabilityReport(
        samples=rows,
        ratio_min=float(ratios.min()),
        ratio_median=float(np.median(ratios)),
        ratio_max=float(ratios.max()),
        excluded_pairs=excluded,
        within_policy=bool(ratios.min() >= 0.25 and ratios.max() <= 4.0),
        pitch=pitch,
    )
    logger.info(
        "h/k over %d pairs: min %.3f median %.3f max %.3f", len(rows), report.ratio_min, report.ratio_median,
        report.ratio_max,
    )
    return report


def image_polyline(cmap: ConformalMap, path: np.ndarray) -> np.ndarray:
    """Image of a disk polyline whose first and last points lie on the unit circle."""
    out = np.empty(path.size, dtype=complex)
    out[1:-1] = evaluate_map(cmap, path[1:-1])
    ends = boundary_trace(cmap, np.angle(path[[0, -1]]))
    out[0], out[-1] = ends[0], ends[1]
    return out


def polyline_length(points: np.ndarray) -> float:
    return float(np.sum(np.abs(np.diff(points))))


def gehring_hayman_ratio(
    cmap: ConformalMap,
    domain: JordanDomain,
    xi1: complex,
    xi2: complex,
    pitch: Optional[float] = None,
    samples: Optional[int] = None,
) -> GehringHaymanReport:
    """Length of the image geodesic over the internal distance of its endpoints."""
    pitch = settings.default_pitch if pitch is None else pitch
    samples = samples or 4 * settings.crosscut_samples
    path = hyperbolic_geodesic_disk(xi1, xi2, samples, spacing="graded")
    image = image_polyline(cmap, path)
    length = polyline_length(image)
    d_i = internal_distance(domain, as_xy(image[0]), as_xy(image[-1]), pitch)
    return GehringHaymanReport(
        xi1=complex(xi1), xi2=complex(xi2), geodesic_length=length, internal_distance=d_i,
        ratio=length / d_i, pitch=pitch,
    )


def metric_sample(cmap: ConformalMap, domain: JordanDomain, z1: complex, z2: complex, pitch: float) -> MetricSample:
    """MetricSample for two disk points: h exact, k on the grid, plus the image geodesic length."""
    if is_single_point(z1) and abs(z1 - z2) == 0.0:
        w = evaluate_map(cmap, z1)
        return MetricSample(z1=w, z2=w, h=0.0, k=0.0, geodesic_length=0.0, pitch=pitch)
    w1, w2 = evaluate_map(cmap, z1), evaluate_map(cmap, z2)
    h = hyperbolic_distance_disk(z1, z2)
    k = quasi_hyperbolic_distance(domain, as_xy(w1), as_xy(w2), pitch).value
    seg = np.linspace(0.0, 1.0, 65)
    chord = evaluate_map(cmap, z1 + (z2 - z1) * seg)
    return MetricSample(z1=w1, z2=w2, h=h, k=k, geodesic_length=polyline_length(chord), pitch=pitch)
