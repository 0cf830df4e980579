# conformext/services/crosscuts.py

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..config import settings
from ..exceptions import GapTooWide, Inconclusive, NoValidN0, TailDivergent
from ..models.conformal_map import ConformalMap
from ..models.crosscut import (
    CellDiagnostics,
    Crosscut,
    CrosscutSumTable,
    CycleReport,
    DisjointnessAudit,
    DyadicFamily,
    GeodesicCellDecomposition,
    LengthBoundReport,
)
from ..models.phi import PhiSpec
from ..utils.quadrature import legendre_rule
from .boundary import BoundaryParametrization
from .conformal import (
    boundary_trace,
    evaluate_derivative,
    evaluate_map,
    hyperbolic_geodesic_disk,
    mobius_disk_to_halfplane,
)
from .geometry import count_polyline_crossings
from .metrics import image_polyline, polyline_length
from .phi import classify_tail_integral, phi_eval

logger = logging.getLogger(__name__)

CYCLE_GAP = 4.0 * np.pi / (1.0 + np.pi ** 2)
CONVERGENCE_RATIO = 0.97
TRAILING_GENERATIONS = 4
# disk points closer than this to the unit circle are pulled inside before evaluation
DISK_MARGIN = 1e-15
LENGTH_BOUND_T0 = 0.5 * np.log(2.0)


# Dyadic families

def build_dyadic_cycles(
    param: BoundaryParametrization, cmap: ConformalMap, N: int, theta0: float = 0.0
) -> DyadicFamily:
    """Dyadic parameter arcs of generations n0..N with the preimage angles of their endpoints.

    n0 is the least generation from which every preimage gap, up to N, is at most 4 pi / (1 + pi^2).
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    finest = theta0 + 2.0 * np.pi * np.arange(2 ** N) / 2 ** N
    xi_finest = param.preimage_angles(cmap, finest)
    params, xis, max_gaps = [], [], []
    for n in range(1, N + 1):
        stride = 2 ** (N - n)
        xi = xi_finest[::stride]
        points = np.exp(1j * xi)
        max_gaps.append(float(np.max(np.abs(np.roll(points, -1) - points))))
        params.append(finest[::stride])
        xis.append(xi)
    ok = np.array(max_gaps) <= CYCLE_GAP
    valid = [n for n in range(1, N + 1) if ok[n - 1:].all()]
    if not valid:
        raise NoValidN0(
            f"preimage gaps stay above {CYCLE_GAP:.4f} through generation {N}", max_gap=max_gaps[-1], N=N,
        )
    n0 = valid[0]
    logger.debug("dyadic family (%s): n0=%d, N=%d", param.name, n0, N)
    return DyadicFamily(
        n0=n0, N=N, theta0=theta0, parametrization=param.name,
        params=params[n0 - 1:], xi=xis[n0 - 1:], max_gaps=max_gaps,
    )


# Crosscuts

def crosscut(
    cmap: ConformalMap,
    xi1: complex,
    xi2: complex,
    samples: Optional[int] = None,
    spacing: str = "arc",
    refine: bool = True,
) -> Crosscut:
    """Image of the disk geodesic from xi1 to xi2; `refine` also measures it at doubled sampling."""
    samples = samples or settings.crosscut_samples
    path = hyperbolic_geodesic_disk(xi1, xi2, samples, spacing=spacing)
    image = image_polyline(cmap, path)
    refined = None
    if refine:
        fine = hyperbolic_geodesic_disk(xi1, xi2, 2 * samples - 1, spacing=spacing)
        refined = polyline_length(image_polyline(cmap, fine))
    return Crosscut(
        n=0, j=0, xi1=path[0], xi2=path[-1], polyline=image, length=polyline_length(image),
        refined_length=refined,
    )


class FamilyImages:
    """Crosscut polylines of a dyadic family, generation by generation.

    Boundary values are traced once on the finest generation and shared by the coarser ones.
    """

    def __init__(self, cmap: ConformalMap, family: DyadicFamily, samples: Optional[int] = None,
                 spacing: str = "graded"):
        self.cmap = cmap
        self.family = family
        self.samples = samples or settings.crosscut_samples
        self.spacing = spacing
        self._traces = boundary_trace(cmap, family.xi_at(family.N))
        self._cache: Dict[int, np.ndarray] = {}

    def polylines(self, n: int) -> np.ndarray:
        """Array (2^n, samples) of image polylines for generation n."""
        if n not in self._cache:
            start, end = self.family.xi_pairs(n)
            paths = np.array([
                hyperbolic_geodesic_disk(np.exp(1j * a), np.exp(1j * b), self.samples, spacing=self.spacing)
                for a, b in zip(start, end)
            ])
            images = np.empty_like(paths)
            images[:, 1:-1] = evaluate_map(self.cmap, paths[:, 1:-1].ravel()).reshape(paths[:, 1:-1].shape)
            ends = self._traces[:: 2 ** (self.family.N - n)]
            images[:, 0] = ends
            images[:, -1] = np.roll(ends, -1)
            self._cache[n] = images
        return self._cache[n]

    def lengths(self, n: int) -> np.ndarray:
        return np.sum(np.abs(np.diff(self.polylines(n), axis=1)), axis=1)

    def crosscuts(self, n: int) -> List[Crosscut]:
        start, end = self.family.xi_pairs(n)
        lines = self.polylines(n)
        return [
            Crosscut(n=n, j=j, xi1=np.exp(1j * start[j]), xi2=np.exp(1j * end[j]), polyline=line,
                     length=polyline_length(line))
            for j, line in enumerate(lines)
        ]


def crosscut_sum(
    cmap: ConformalMap,
    family: DyadicFamily,
    p: float,
    samples: Optional[int] = None,
    images: Optional[FamilyImages] = None,
) -> CrosscutSumTable:
    """Generation terms T_n = 2^((p-2)n) sum_j l^p with partial sums; convergent when the last four
    ratios T_{n+1}/T_n are all below 0.97."""
    if not 1.0 <= p < 2.0:
        raise ValueError(f"exponent p={p} outside [1, 2)")
    generations = list(family.generations)
    if len(generations) < TRAILING_GENERATIONS + 1:
        raise Inconclusive(
            f"{len(generations)} generations from n0={family.n0}; need {TRAILING_GENERATIONS + 1}",
            budget=len(generations),
        )
    images = images or FamilyImages(cmap, family, samples)
    lengths = [images.lengths(n) for n in generations]
    terms = np.array([2.0 ** ((p - 2.0) * n) * np.sum(row ** p) for n, row in zip(generations, lengths)])
    ratios = terms[1:] / terms[:-1]
    convergent = bool(np.all(ratios[-TRAILING_GENERATIONS:] < CONVERGENCE_RATIO))
    logger.info("crosscut sum p=%g: S=%.6g, trailing ratio %.4f (%s)", p, terms.sum(), ratios[-1],
                "convergent" if convergent else "no certificate")
    return CrosscutSumTable(
        p=p, n0=family.n0, N=family.N, generations=generations, terms=terms, partials=np.cumsum(terms),
        ratios=ratios, convergent=convergent, lengths=lengths,
    )


def audit_disjointness(polylines: Sequence[np.ndarray]) -> DisjointnessAudit:
    crossings, offenders = count_polyline_crossings(polylines)
    if crossings:
        logger.warning("%d polyline crossings among %d crosscuts", crossings, len(polylines))
    return DisjointnessAudit(polylines=len(polylines), crossings=crossings, offenders=offenders)


def audit_family(images: FamilyImages, N: Optional[int] = None) -> DisjointnessAudit:
    top = images.family.N if N is None else N
    lines = [line for n in range(images.family.n0, top + 1) for line in images.polylines(n)]
    return audit_disjointness(lines)


# Cells along a short geodesic

def cell_decomposition(xi1: complex, xi2: complex, m_max: int) -> GeodesicCellDecomposition:
    xi1 = complex(xi1) / abs(complex(xi1))
    xi2 = complex(xi2) / abs(complex(xi2))
    gap = abs(xi1 - xi2)
    if gap > CYCLE_GAP + 1e-12:
        raise GapTooWide(f"endpoint gap {gap:.6g} exceeds {CYCLE_GAP:.6g}", gap=gap)
    mid = (xi1 + xi2) / abs(xi1 + xi2)
    rotation = np.conj(mid)
    u1 = xi1 * rotation
    if u1.imag < 0:
        u1 = xi2 * rotation
    mobius = mobius_disk_to_halfplane(u1)
    k = np.arange(1, m_max + 2, dtype=float)
    return GeodesicCellDecomposition(
        xi1=xi1, xi2=xi2, m_max=m_max, rotation=rotation, a=mobius.a,
        theta=np.pi / 2.0 ** k,
        R=1.0 - 2.0 ** -(k[:-1] + 1.0),
    )


def _inside_disk(z: np.ndarray) -> np.ndarray:
    """Pull points that rounded onto (or past) the unit circle back to radius 1 - DISK_MARGIN."""
    rho = np.abs(z)
    edge = rho > 1.0 - DISK_MARGIN
    if not edge.any():
        return z
    return np.where(edge, z / np.where(edge, rho, 1.0) * (1.0 - DISK_MARGIN), z)


def _pullback(cmap: ConformalMap, decomp: GeodesicCellDecomposition, w: np.ndarray):
    """Disk points and |g'|^2 for g = f o T^-1 at half-plane points w."""
    z = _inside_disk(decomp.to_disk(w))
    g = evaluate_derivative(cmap, z.ravel()).reshape(z.shape) * decomp.to_disk_derivative(w)
    return z, np.abs(g) ** 2


def _tensor_nodes(r_lo, r_hi, t_lo, t_hi, nodes):
    x, wx = legendre_rule(nodes)
    r = r_lo + 0.5 * (r_hi - r_lo) * (x + 1.0)
    t = t_lo + 0.5 * (t_hi - t_lo) * (x + 1.0)
    weight = 0.25 * (r_hi - r_lo) * (t_hi - t_lo) * np.outer(wx, wx) * r[:, None]
    return r[:, None] * np.exp(1j * t)[None, :], weight


def _hyperbolic_radius(z: np.ndarray) -> np.ndarray:
    rho = np.abs(z)
    return np.log1p(rho) - np.log1p(-rho)


def cell_diagnostics(
    cmap: ConformalMap, spec: PhiSpec, decomp: GeodesicCellDecomposition, nodes: int = 8
) -> List[CellDiagnostics]:
    x, wx = legendre_rule(nodes)
    out = []
    for m in decomp.indices:
        lo, hi = decomp.angles(m)
        w, weight = _tensor_nodes(decomp.radius(m), 1.0, lo, hi, nodes)
        z, jac = _pullback(cmap, decomp, w)
        image_area = float(np.sum(weight * jac))
        phi_integral = float(np.sum(weight * jac * phi_eval(spec, _hyperbolic_radius(z))))
        t = lo + 0.5 * (hi - lo) * (x + 1.0)
        _, arc_jac = _pullback(cmap, decomp, np.exp(1j * t))
        arc_length = float(0.5 * (hi - lo) * np.dot(wx, np.sqrt(arc_jac)))
        _, corner_jac = _pullback(cmap, decomp, np.array([decomp.corner(m)]))
        g_abs = float(np.sqrt(corner_jac[0]))
        k = abs(m)
        out.append(CellDiagnostics(
            m=m, disk_area=decomp.area(m), image_area=image_area, arc_length=arc_length,
            derivative_modulus=g_abs, c1=arc_length * 2.0 ** k / g_abs,
            c2=image_area * 4.0 ** k / g_abs ** 2, phi_integral=phi_integral,
            phi_lower_bound=image_area * phi_eval(spec, k * np.log(2.0)),
        ))
    return out


def _dyadic_breaks(levels: int) -> np.ndarray:
    return np.concatenate([[0.0], 2.0 ** -np.arange(levels, 0, -1, dtype=float), [1.0]])


def delta_integral(
    cmap: ConformalMap, spec: PhiSpec, decomp: GeodesicCellDecomposition, levels: int = 30, nodes: int = 8
) -> float:
    """Integral of phi(h(f(0), .)) over the image of the region between the geodesic and the short arc.

    In half-plane coordinates the region is the upper half unit disk; panels are dyadic toward
    r = 0 and toward both ends of the angle range.
    """
    r_breaks = _dyadic_breaks(levels)
    half = 0.5 * np.pi * _dyadic_breaks(levels)
    t_breaks = np.concatenate([half, np.pi - half[::-1][1:]])
    total = 0.0
    for r_lo, r_hi in zip(r_breaks[:-1], r_breaks[1:]):
        if r_lo == 0.0:
            continue
        for t_lo, t_hi in zip(t_breaks[:-1], t_breaks[1:]):
            if t_lo == 0.0 or t_hi == np.pi:
                continue
            w, weight = _tensor_nodes(r_lo, r_hi, t_lo, t_hi, nodes)
            z, jac = _pullback(cmap, decomp, w)
            total += float(np.sum(weight * jac * phi_eval(spec, _hyperbolic_radius(z))))
    return total


def crosscut_length_bound_check(
    cmap: ConformalMap,
    spec: PhiSpec,
    xi1: complex,
    xi2: complex,
    m_max: int = 8,
    samples: Optional[int] = None,
) -> LengthBoundReport:
    """Compare l(Gamma)^2 with the tail integral of 1/phi from log(2)/2 times the phi(h) integral
    over the cells under Gamma."""
    verdict = classify_tail_integral(spec, t0=LENGTH_BOUND_T0)
    if not verdict.is_convergent:
        raise TailDivergent(f"tail integral of 1/{spec.label} diverges; the bound is vacuous", windows=verdict.windows)
    decomp = cell_decomposition(xi1, xi2, m_max)
    cut = crosscut(cmap, xi1, xi2, samples or 4 * settings.crosscut_samples, spacing="graded", refine=False)
    cells = cell_diagnostics(cmap, spec, decomp)
    cells_integral = float(sum(c.phi_integral for c in cells))
    lhs = cut.length ** 2
    report = LengthBoundReport(
        lhs=lhs, length=cut.length, tail_integral=float(verdict.value),
        delta_integral=delta_integral(cmap, spec, decomp), cells_integral=cells_integral,
        empirical_c=lhs / (verdict.value * cells_integral), m_max=m_max, cells=cells,
    )
    logger.debug("length bound: lhs=%.6g empirical c=%.4g", lhs, report.empirical_c)
    return report


# Cycles

def rotation_cycle(x0: complex, k: int) -> np.ndarray:
    """x_j = e^{2 pi i j / k} x_0"""
    return complex(x0) * np.exp(2j * np.pi * np.arange(k) / k)


def cycle_crosscut_sum(
    cmap: ConformalMap, cycle: Sequence[complex], K: Optional[int] = None, samples: Optional[int] = None
) -> CycleReport:
    """Sum of squared crosscut lengths over the legs x_i -> x_{i+1} of a closed boundary cycle."""
    points = np.asarray(cycle, dtype=complex)
    points = points / np.abs(points)
    gaps = np.abs(np.roll(points, -1) - points)
    if np.any(gaps > CYCLE_GAP + 1e-12):
        raise GapTooWide(f"cycle gap {gaps.max():.6g} exceeds {CYCLE_GAP:.6g}", gap=float(gaps.max()))
    samples = samples or 4 * settings.crosscut_samples
    lengths = np.array([
        crosscut(cmap, a, b, samples, spacing="graded", refine=False).length
        for a, b in zip(points, np.roll(points, -1))
    ])
    sum_squares = float(np.sum(lengths ** 2))
    K = K or points.size
    return CycleReport(
        points=points, lengths=lengths, sum_squares=sum_squares, K=K, diam_bound=float(np.sqrt(K * sum_squares)),
    )
