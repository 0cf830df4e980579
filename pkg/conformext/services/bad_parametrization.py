# conformext/services/bad_parametrization.py

import logging
from typing import List, Optional, Sequence

import numpy as np

from ..config import settings
from ..exceptions import InsufficientDepth
from ..models.conformal_map import ConformalMap
from ..models.counterexample import BadParametrizationPlan, ProbeReport, SampledDiskMap
from ..models.domain import JordanDomain
from ..utils.quadrature import legendre_rule
from ..utils.summation import compensated_cumsum
from .boundary import PolygonArcLength, Reparametrized
from .conformal import boundary_trace, evaluate_map
from .geometry import boundary_coordinate, boundary_point_at, perimeter

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
SCAN_POINTS = 4096
BISECTIONS = 40
MAX_HALVINGS = 40
RADIAL_NODES = 16


def source_arcs(N: int) -> np.ndarray:
    """A_1 = [pi/4, pi/2] and A_n = [pi - pi 2^-n, pi - pi 2^-n + pi 4^-n] for n >= 2."""
    rows = [[0.25 * np.pi, 0.5 * np.pi]]
    for n in range(2, N + 1):
        start = np.pi - np.pi * 2.0 ** -n
        rows.append([start, start + np.pi * 4.0 ** -n])
    return np.asarray(rows[:N])


class _ArcReference:
    """Reference angles tau in [0, 2 pi]: [0, pi] covers [s_start, s0], [pi, 2 pi] the rest."""

    def __init__(self, domain: JordanDomain, s_start: float, s0: float):
        self.domain = domain
        self.period = perimeter(domain)
        self.s_start = s_start
        self.s0 = s0 if s0 > s_start else s0 + self.period

    def arc(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        near = self.s_start + (self.s0 - self.s_start) * tau / np.pi
        far = self.s0 + (self.s_start + self.period - self.s0) * (tau - np.pi) / np.pi
        return np.where(tau <= np.pi, near, far)

    def slope(self, tau: float) -> float:
        span = self.s0 - self.s_start if tau <= np.pi else self.s_start + self.period - self.s0
        return span / np.pi

    def __call__(self, tau) -> np.ndarray:
        return boundary_point_at(self.domain, self.arc(tau))


def _first_crossing(values_at, lo: float, level: float) -> Optional[float]:
    grid = np.linspace(lo, np.pi, SCAN_POINTS + 1)[1:]
    values = values_at(grid)
    hits = np.flatnonzero(values >= level)
    if not hits.size:
        return None
    k = int(hits[0])
    if k == 0:
        a, b = lo, grid[0]
        if values_at(np.array([lo]))[0] >= level:
            return lo
    else:
        a, b = grid[k - 1], grid[k]
    for _ in range(BISECTIONS):
        mid = 0.5 * (a + b)
        if values_at(np.array([mid]))[0] >= level:
            b = mid
        else:
            a = mid
    return b


def bad_parametrization(
    domain: JordanDomain,
    oracle,
    N: int,
    omega0: Optional[complex] = None,
    unit: Optional[float] = None,
    samples: Optional[int] = None,
    strict: bool = False,
) -> BadParametrizationPlan:
    """Circle homeomorphism that parks the arcs A_n on boundary intervals at internal distance
    at least offset + unit 4^n from the base point.

    `oracle` answers `lower(points)` with certified lower internal distances. The reference runs
    in arc length from the boundary point nearest the base (on the half of the boundary before
    `omega0`) to `omega0`, the far point. Intervals are placed in order along that run; when a
    level cannot be certified the plan stops there (or raises with `strict`).
    """
    samples = samples or settings.crosscut_samples
    P = perimeter(domain)
    if omega0 is None:
        s_grid = np.arange(SCAN_POINTS) * (P / SCAN_POINTS)
        far = oracle.lower(boundary_point_at(domain, s_grid))
        s0 = float(s_grid[int(np.argmax(far))])
    else:
        s0 = float(boundary_coordinate(domain, omega0)[0])
    omega = complex(boundary_point_at(domain, s0))
    d_max = float(oracle.lower(np.array([omega]))[0])

    back = s0 - 0.5 * P + np.arange(SCAN_POINTS + 1) * (0.5 * P / SCAN_POINTS)
    near = oracle.lower(boundary_point_at(domain, back))
    k_min = int(np.argmin(near))
    s_start = float(np.mod(back[k_min], P))
    offset = float(near[k_min])
    if unit is None:
        unit = (d_max - offset) / 4.0 ** (N + 1)
    if not unit > 0:
        raise InsufficientDepth("the far point is no farther than the near point", max_certified=0)

    ref = _ArcReference(domain, s_start, s0)

    def values_at(tau):
        return oracle.lower(ref(tau))

    t: List[float] = []
    delta: List[float] = []
    certified: List[float] = []
    lo = 0.0
    for k in range(1, N + 1):
        level = offset + unit * 4.0 ** k
        tk = _first_crossing(values_at, lo, offset + 2.0 * unit * 4.0 ** k)
        dk = None
        if tk is not None:
            dk = 0.5 * min(tk - lo, np.pi - tk)
            for _ in range(MAX_HALVINGS):
                tau = np.linspace(tk - dk, tk + dk, samples)
                spacing = ref.slope(tk) * 2.0 * dk / (samples - 1)
                value = float(values_at(tau).min() - 0.5 * spacing)
                if value >= level:
                    break
                dk *= 0.5
            else:
                dk = None
        if dk is None or dk <= 0:
            if strict or k == 1:
                raise InsufficientDepth(
                    f"level {k} (distance {level:.6g}) cannot be certified", max_certified=k - 1,
                )
            logger.warning("bad parametrization certified up to level %d of %d", k - 1, N)
            break
        t.append(tk)
        delta.append(dk)
        certified.append(value)
        lo = tk + dk

    depth = len(t)
    arcs = source_arcs(depth)
    t_arr, d_arr = np.asarray(t), np.asarray(delta)
    rows = [[0.0, 0.0]]
    for n in range(depth):
        rows.append([arcs[n, 0], t_arr[n] - d_arr[n]])
        rows.append([arcs[n, 1], t_arr[n] + d_arr[n]])
    rows += [[np.pi, np.pi], [TWO_PI, TWO_PI]]
    knots = np.asarray(rows)
    arc_knots = knots.copy()
    arc_knots[:, 1] = (ref.arc(knots[:, 1]) - s_start) * (TWO_PI / P)

    logger.info(
        "bad parametrization: %d levels, offset %.4g, unit %.4g, far distance %.4g",
        depth, offset, unit, d_max,
    )
    return BadParametrizationPlan(
        N=N,
        max_certified=depth,
        reference="arc_length",
        period=P,
        s_start=s_start,
        s0=s0,
        omega0=omega,
        offset=offset,
        unit=unit,
        d_max=d_max,
        t=t_arr,
        delta=d_arr,
        source_arcs=arcs,
        certified=np.asarray(certified),
        knots=knots,
        arc_knots=arc_knots,
    )


def parametrization_from_plan(domain: JordanDomain, plan: BadParametrizationPlan) -> Reparametrized:
    return Reparametrized(PolygonArcLength(domain, plan.s_start), plan.arc_knots)


def identity_plan(cmap: ConformalMap, N: int) -> BadParametrizationPlan:
    """The map's own boundary values on the same arcs, as a baseline for the probe."""
    arcs = source_arcs(N)
    knots = np.array([[0.0, 0.0], [TWO_PI, TWO_PI]])
    return BadParametrizationPlan(
        N=N,
        max_certified=N,
        reference="own_trace",
        period=TWO_PI,
        s_start=0.0,
        s0=np.pi,
        omega0=complex(boundary_trace(cmap, np.pi)),
        offset=0.0,
        unit=0.0,
        d_max=0.0,
        t=arcs.mean(axis=1),
        delta=0.5 * (arcs[:, 1] - arcs[:, 0]),
        source_arcs=arcs,
        certified=np.zeros(N),
        knots=knots,
        arc_knots=knots,
    )


def sample_disk_map(cmap: ConformalMap, radii: Sequence[float], angles: Sequence[float]) -> SampledDiskMap:
    """Values of the map on a polar grid; radius 1 takes boundary values."""
    radii = np.asarray(radii, dtype=float)
    angles = np.asarray(angles, dtype=float)
    values = np.empty((radii.size, angles.size), dtype=complex)
    for i, r in enumerate(radii):
        if r >= 1.0:
            values[i] = boundary_trace(cmap, angles)
        else:
            values[i] = evaluate_map(cmap, r * np.exp(1j * angles))
    return SampledDiskMap(radii=radii, angles=angles, values=values)


def _radial_variation(extension: SampledDiskMap, eta: float, lo: float, hi: float) -> float:
    x, w = legendre_rule(RADIAL_NODES)
    half = 0.5 * (hi - lo)
    theta = lo + half * (x + 1.0)
    rows = extension.along_radius(theta)[extension.radii >= eta]
    variation = np.abs(np.diff(rows, axis=0)).sum(axis=0)
    return float(half * np.dot(w, variation))


def w11_lowerbound_probe(
    plan: BadParametrizationPlan,
    param,
    oracle,
    eta: float = 0.5,
    N: Optional[int] = None,
    extension: Optional[SampledDiskMap] = None,
    samples: Optional[int] = None,
) -> ProbeReport:
    """Lower estimates L_n for the gradient mass of any extension over the sectors above A_n.

    Every radial segment from eta e^{it} to e^{it} has length at least the internal distance of
    its endpoint minus D_eta, the largest distance reached on the circle of radius eta.
    """
    samples = samples or settings.crosscut_samples
    N = plan.N if N is None else N
    used = list(range(1, min(N, plan.max_certified) + 1))
    excluded = list(range(plan.max_certified + 1, N + 1))
    if excluded:
        logger.info("probe skips uncertified levels %s", excluded)

    if extension is not None:
        row = int(np.argmin(np.abs(extension.radii - eta)))
        d_eta = float(oracle.upper(extension.values[row]).max())
    else:
        d_eta = plan.offset

    arcs = source_arcs(len(used)) if used else np.zeros((0, 2))
    L = np.empty(len(used))
    radial = np.empty(len(used)) if extension is not None else None
    for k, (lo, hi) in enumerate(arcs):
        pts = param(np.linspace(lo, hi, samples))
        gap = float(np.abs(np.diff(pts)).max())
        reach = float(oracle.lower(pts).min()) - 0.5 * gap
        L[k] = eta * (hi - lo) * max(reach - d_eta, 0.0)
        if radial is not None:
            radial[k] = eta * _radial_variation(extension, eta, lo, hi)

    report = ProbeReport(
        eta=eta,
        d_eta=d_eta,
        n=used,
        L=L,
        partials=compensated_cumsum(L) if L.size else L,
        radial=radial,
        excluded=excluded,
    )
    logger.info("probe over %d arcs: partial %.6g, growth %s", len(used), report.partials[-1] if L.size else 0.0, report.growth)
    return report
