# conformext/services/conformal.py

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import gamma

from ..config import settings
from ..exceptions import (
    CoincidentEndpoints,
    ConformalError,
    CrowdingOverflow,
    InvalidNormalization,
    NonConvergence,
    OutsideDisk,
    PointOutside,
    PreimageNotFound,
)
from ..models.conformal_map import ConformalMap, DiskAutomorphism, MapKind, MobiusMap
from ..models.domain import JordanDomain
from ..utils.quadrature import jacobi_rule, legendre_rule
from .geometry import contains

logger = logging.getLogger(__name__)

MAX_SC_VERTICES = 64
CROWDING_GAP = 1e-14
_EVAL_BUDGET = 1_500_000


def _quarter_period() -> float:
    """K = integral_0^1 (1 - t^4)^(-1/2) dt = Gamma(1/4)^2 / (4 sqrt(2 pi))"""
    return float(gamma(0.25) ** 2 / (4.0 * np.sqrt(2.0 * np.pi)))


SQUARE_HALF_DIAGONAL = _quarter_period()


# Catalog

def identity_map() -> ConformalMap:
    return ConformalMap(kind=MapKind.IDENTITY, center_image=0j)


def disk_to_square_map() -> ConformalMap:
    """integral_0^z (1 - t^4)^(-1/2) dt: the square with vertices K * i^k"""
    k = np.arange(4)
    return ConformalMap(
        kind=MapKind.DISK_TO_SQUARE,
        prevertices=k * np.pi / 2.0,
        turning_parameters=np.full(4, -0.5),
        scale=1.0 + 0j,
        offset=0j,
        center_image=0j,
        vertices=SQUARE_HALF_DIAGONAL * (1j ** k),
    )


# Möbius maps

def mobius_disk_to_halfplane(xi1: complex) -> MobiusMap:
    """T(z) = a (1 - z) / (1 + z) with T(xi1) = 1, T(conj xi1) = -1 and T(1) = 0."""
    xi1 = complex(xi1)
    if abs(abs(xi1) - 1.0) > 1e-9 or not (xi1.real > 0.0 and xi1.imag > 0.0):
        raise InvalidNormalization(
            f"xi1 = {xi1:.6g} must lie on the open first-quadrant arc of the unit circle",
            xi1=[xi1.real, xi1.imag],
        )
    return MobiusMap(a=1j * xi1.imag / (1.0 - xi1.real))


def disk_automorphism(center: complex, rotation: float = 0.0) -> DiskAutomorphism:
    if abs(center) >= 1.0:
        raise OutsideDisk("automorphism center must lie in the open disk", center=[center.real, center.imag])
    return DiskAutomorphism(center=center, rotation=rotation)


def random_automorphisms(rng: np.random.Generator, count: int, max_radius: float = 0.9) -> List[DiskAutomorphism]:
    radii = max_radius * np.sqrt(rng.random(count))
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    rotations = rng.uniform(0.0, 2.0 * np.pi, count)
    return [disk_automorphism(complex(r * np.exp(1j * a)), float(t)) for r, a, t in zip(radii, angles, rotations)]


# Schwarz-Christoffel integrand and quadrature

def _integrand(t: np.ndarray, zk: np.ndarray, beta: np.ndarray, skip: Optional[int] = None) -> np.ndarray:
    log_sum = np.zeros(np.shape(t), dtype=complex)
    for k in range(zk.size):
        if k == skip or beta[k] == 0.0:
            continue
        log_sum += beta[k] * np.log(1.0 - t / zk[k])
    return np.exp(log_sum)


def _nearest_singularity(p: complex, zk: np.ndarray, exclude: Optional[int] = None) -> float:
    d = np.abs(zk - p)
    if exclude is not None:
        d[exclude] = np.inf
    return float(d.min()) if d.size else np.inf


def _jacobi_panel(a: complex, c: complex, k: int, zk, beta, n: int, at_start: bool) -> complex:
    """Integral over [a, c] when the prevertex z_k sits at a (at_start) or at c."""
    if at_start:
        x, w = jacobi_rule(n, 0.0, beta[k])
        factor = (-(c - a) / (2.0 * zk[k])) ** beta[k]
    else:
        x, w = jacobi_rule(n, beta[k], 0.0)
        factor = ((c - a) / (2.0 * zk[k])) ** beta[k]
    t = a + (c - a) * (x + 1.0) / 2.0
    return complex(0.5 * (c - a) * factor * np.dot(w, _integrand(t, zk, beta, skip=k)))


def _segment_integral(
    a: complex,
    b: complex,
    zk: np.ndarray,
    beta: np.ndarray,
    start_k: Optional[int] = None,
    end_k: Optional[int] = None,
    n: int = 24,
) -> complex:
    """Integral of the SC integrand along the straight segment [a, b].

    Endpoint prevertices get a Gauss-Jacobi panel; the rest is covered by Gauss-Legendre
    panels no longer than half the distance to the nearest prevertex.
    """
    length = abs(b - a)
    if length == 0.0:
        return 0j
    direction = b - a
    total = 0j
    s_lo, s_hi = 0.0, 1.0
    if start_k is not None:
        h = min(0.5 * _nearest_singularity(a, zk, start_k) / length, 0.5 if end_k is not None else 1.0)
        total += _jacobi_panel(a, a + h * direction, start_k, zk, beta, n, at_start=True)
        s_lo = h
    if end_k is not None and s_lo < 1.0:
        h = min(0.5 * _nearest_singularity(b, zk, end_k) / length, 1.0 - s_lo)
        total += _jacobi_panel(b - h * direction, b, end_k, zk, beta, n, at_start=False)
        s_hi = 1.0 - h

    x, w = legendre_rule(n)
    s = s_lo
    while s < s_hi - 1e-15:
        p = a + s * direction
        h = min(0.5 * _nearest_singularity(p, zk) / length, s_hi - s)
        lo, hi = a + s * direction, a + (s + h) * direction
        t = lo + (hi - lo) * (x + 1.0) / 2.0
        total += 0.5 * (hi - lo) * np.dot(w, _integrand(t, zk, beta))
        s += h
    return complex(total)


def _integral_from_origin(z: np.ndarray, zk: np.ndarray, beta: np.ndarray, n: int) -> np.ndarray:
    """Vectorized integral_0^z along rays; panels halve their distance to the unit circle."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    out = np.zeros(z.size, dtype=complex)
    r = np.abs(z)
    live = np.nonzero(r > 0.0)[0]
    if live.size == 0:
        return out
    x, w = legendre_rule(n)
    rho_end = 1.0 - r[live]
    levels = int(np.max(np.ceil(np.log2(1.0 / rho_end)))) + 1
    chunk = max(1, _EVAL_BUDGET // (levels * n))
    steps = 2.0 ** -np.arange(levels + 1)
    for start in range(0, live.size, chunk):
        idx = live[start:start + chunk]
        zz = z[idx]
        rho = np.maximum(steps[None, :], (1.0 - r[idx])[:, None])
        s = (1.0 - rho) / r[idx][:, None]
        s_a, s_b = s[:, :-1], s[:, 1:]
        nodes = s_a[..., None] + (s_b - s_a)[..., None] * (x[None, None, :] + 1.0) / 2.0
        t = zz[:, None, None] * nodes
        weights = 0.5 * (s_b - s_a)[..., None] * w[None, None, :]
        out[idx] = zz * np.sum(weights * _integrand(t, zk, beta), axis=(1, 2))
    return out


# Evaluation

def _as_disk_points(z) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    flat = arr.reshape(-1)
    if flat.size and np.max(np.abs(flat)) >= 1.0:
        bad = flat[np.argmax(np.abs(flat))]
        raise OutsideDisk(f"|z| = {abs(bad):.6g} is not inside the unit disk", z=[bad.real, bad.imag])
    return flat, scalar


def evaluate_map(cmap: ConformalMap, z, nodes: Optional[int] = None):
    flat, scalar = _as_disk_points(z)
    if not cmap.is_polygonal:
        values = flat.copy()
    else:
        n = nodes or settings.quadrature_nodes
        values = cmap.offset + cmap.scale * _integral_from_origin(
            flat, cmap.prevertex_points, cmap.turning_parameters, n
        )
    return complex(values[0]) if scalar else values.reshape(np.shape(z))


def evaluate_derivative(cmap: ConformalMap, z):
    flat, scalar = _as_disk_points(z)
    if not cmap.is_polygonal:
        values = np.ones(flat.size, dtype=complex)
    else:
        values = cmap.scale * _integrand(flat, cmap.prevertex_points, cmap.turning_parameters)
    return complex(values[0]) if scalar else values.reshape(np.shape(z))


def _trace_one(cmap: ConformalMap, theta: float, n: int) -> complex:
    base = cmap.prevertices[0]
    rel = np.mod(cmap.prevertices - base, 2.0 * np.pi)
    phi = float(np.mod(theta - base, 2.0 * np.pi))
    k = int(np.searchsorted(rel, phi, side="right") - 1)
    m = cmap.n_vertices
    k1 = (k + 1) % m
    upper = rel[k + 1] if k + 1 < m else 2.0 * np.pi
    wk, wk1 = cmap.vertices[k], cmap.vertices[k1]
    zk = cmap.prevertex_points
    beta = cmap.turning_parameters
    if phi - rel[k] <= 1e-15:
        return complex(wk)
    if upper - phi <= 1e-15:
        return complex(wk1)
    point = np.exp(1j * theta)
    if phi - rel[k] <= upper - phi:
        value = wk + cmap.scale * _segment_integral(zk[k], point, zk, beta, start_k=k, n=n)
    else:
        value = wk1 - cmap.scale * _segment_integral(point, zk[k1], zk, beta, end_k=k1, n=n)
    side = wk1 - wk
    t = float(np.clip(((value - wk) * np.conj(side)).real / abs(side) ** 2, 0.0, 1.0))
    return complex(wk + t * side)


def boundary_trace(cmap: ConformalMap, theta, nodes: Optional[int] = None):
    """Boundary value f(e^{i theta}).

    Polygonal maps integrate from the nearest prevertex and land on the side between the two
    adjacent vertices; the identity uses a Richardson limit of radial values.
    """
    theta_arr = np.asarray(theta, dtype=float)
    flat = theta_arr.reshape(-1)
    if not cmap.is_polygonal:
        eps = np.array([1e-3, 1e-4, 1e-5])
        radial = np.exp(1j * flat)[:, None] * (1.0 - eps)[None, :]
        v1, v2, v3 = (evaluate_map(cmap, radial[:, i]) for i in range(3))
        # first-order error in eps: eliminate with factors of 10
        r12 = (10.0 * v2 - v1) / 9.0
        r23 = (10.0 * v3 - v2) / 9.0
        values = (100.0 * r23 - r12) / 99.0
    else:
        n = nodes or settings.quadrature_nodes
        values = np.array([_trace_one(cmap, float(t), n) for t in flat], dtype=complex)
    return complex(values[0]) if theta_arr.ndim == 0 else values.reshape(theta_arr.shape)


# Schwarz-Christoffel parameter problem

def turning_parameters(vertices: np.ndarray) -> np.ndarray:
    incoming = vertices - np.roll(vertices, 1)
    outgoing = np.roll(vertices, -1) - vertices
    return -np.angle(outgoing / incoming) / np.pi


def _angles_from_unknowns(y: np.ndarray) -> np.ndarray:
    logits = np.concatenate([[0.0], y])
    logits -= logits.max()
    gaps = np.exp(logits)
    gaps *= 2.0 * np.pi / gaps.sum()
    return np.concatenate([[0.0], np.cumsum(gaps[:-1])]), gaps


class _ParameterProblem:
    def __init__(self, vertices: np.ndarray, center: complex, nodes: int):
        self.w = vertices
        self.n = vertices.size
        self.beta = turning_parameters(vertices)
        self.sides = np.abs(np.roll(vertices, -1) - vertices)
        self.center = center
        self.nodes = nodes

    def constants(self, y: np.ndarray):
        theta, gaps = _angles_from_unknowns(y)
        if gaps.min() < CROWDING_GAP:
            raise CrowdingOverflow(
                f"prevertex gap {gaps.min():.3e} below {CROWDING_GAP:g}",
                min_gap=float(gaps.min()),
            )
        zk = np.exp(1j * theta)
        n = self.n
        side_integrals = np.array(
            [
                _segment_integral(zk[k], zk[(k + 1) % n], zk, self.beta, start_k=k, end_k=(k + 1) % n, n=self.nodes)
                for k in range(max(n - 2, 1))
            ]
        )
        to_first = _segment_integral(0j, zk[0], zk, self.beta, end_k=0, n=self.nodes)
        scale = (self.w[1] - self.w[0]) / side_integrals[0]
        offset = self.w[0] - scale * to_first
        return theta, side_integrals, scale, offset

    def residual(self, y: np.ndarray) -> np.ndarray:
        _, side_integrals, _, offset = self.constants(y)
        ratios = np.log(np.abs(side_integrals[1:self.n - 2]) / abs(side_integrals[0]))
        target = np.log(self.sides[1:self.n - 2] / self.sides[0])
        center = (offset - self.center) / self.sides[0]
        return np.concatenate([ratios - target, [center.real, center.imag]])


def _jacobian(problem: _ParameterProblem, y: np.ndarray, r0: np.ndarray, central: bool) -> np.ndarray:
    jac = np.empty((r0.size, y.size))
    h = 1e-7
    for j in range(y.size):
        step = np.zeros_like(y)
        step[j] = h
        if central:
            jac[:, j] = (problem.residual(y + step) - problem.residual(y - step)) / (2.0 * h)
        else:
            jac[:, j] = (problem.residual(y + step) - r0) / h
    return jac


def solve_schwarz_christoffel(
    domain: JordanDomain,
    z0_image: complex,
    tol: Optional[float] = None,
    max_iterations: Optional[int] = None,
    central_differences: bool = False,
    nodes: Optional[int] = None,
) -> ConformalMap:
    """Damped Newton on log-gap prevertex coordinates; returns the map with f(0) = z0_image, f'(0) > 0."""
    tol = settings.sc_tolerance if tol is None else tol
    max_iterations = settings.sc_max_iterations if max_iterations is None else max_iterations
    nodes = nodes or settings.quadrature_nodes
    w = domain.complex_vertices
    if w.size > MAX_SC_VERTICES:
        raise ConformalError(f"{w.size} vertices exceed the supported {MAX_SC_VERTICES}", vertices=int(w.size))
    z0_image = complex(z0_image)
    if not contains(domain, np.array([[z0_image.real, z0_image.imag]]))[0]:
        raise PointOutside("z0_image must lie inside the domain", point=[z0_image.real, z0_image.imag])

    problem = _ParameterProblem(w, z0_image, nodes)
    y = np.zeros(w.size - 1)
    r = problem.residual(y)
    norm = float(np.max(np.abs(r)))
    iterations = 0
    while norm >= tol:
        if iterations >= max_iterations:
            raise NonConvergence(
                f"SC solve stopped at residual {norm:.3e} after {iterations} iterations",
                iterations=iterations,
                residual=norm,
            )
        jac = _jacobian(problem, y, r, central_differences)
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        lam = 1.0
        while True:
            candidate = y + lam * step
            try:
                r_new = problem.residual(candidate)
            except CrowdingOverflow:
                r_new = None
            if r_new is not None and np.max(np.abs(r_new)) < norm:
                break
            lam *= 0.5
            if lam < 1e-6:
                raise NonConvergence(
                    f"line search failed at residual {norm:.3e}",
                    iterations=iterations,
                    residual=norm,
                )
        y, r = candidate, r_new
        norm = float(np.max(np.abs(r)))
        iterations += 1
        logger.debug("SC iteration %d residual %.3e step %.3g", iterations, norm, lam)

    theta, _, scale, offset = problem.constants(y)
    rotation = float(np.angle(scale))
    logger.info("SC solve: %d vertices, %d iterations, residual %.2e", w.size, iterations, norm)
    return ConformalMap(
        kind=MapKind.SCHWARZ_CHRISTOFFEL,
        prevertices=theta + rotation,
        turning_parameters=problem.beta,
        scale=abs(scale) + 0j,
        offset=offset,
        center_image=z0_image,
        vertices=w,
        residual=norm,
        iterations=iterations,
    )


def side_length_residual(cmap: ConformalMap, nodes: Optional[int] = None) -> float:
    """Max relative side-length mismatch of the solved map against its polygon."""
    nodes = nodes or settings.quadrature_nodes
    zk = cmap.prevertex_points
    n = cmap.n_vertices
    lengths = np.array(
        [
            abs(cmap.scale * _segment_integral(zk[k], zk[(k + 1) % n], zk, cmap.turning_parameters,
                                              start_k=k, end_k=(k + 1) % n, n=nodes))
            for k in range(n)
        ]
    )
    sides = np.abs(np.roll(cmap.vertices, -1) - cmap.vertices)
    return float(np.max(np.abs(lengths / sides - 1.0)))


# Inverse map

def _seed_grid(cmap: ConformalMap) -> Tuple[np.ndarray, np.ndarray]:
    radii = np.array([0.3, 0.6, 0.8, 0.9, 0.95, 0.98])
    angles = np.arange(32) * 2.0 * np.pi / 32.0 + np.pi / 64.0
    grid = np.concatenate([[0j], (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()])
    return grid, evaluate_map(cmap, grid)


def preimage(cmap: ConformalMap, w, tol: float = 1e-9, seeds: int = 9, max_steps: int = 60):
    """Solve f(z) = w by Newton from the `seeds` grid points with images nearest to w."""
    w_arr = np.asarray(w, dtype=complex)
    flat = w_arr.reshape(-1)
    if not cmap.is_polygonal:
        _as_disk_points(flat)
        return complex(flat[0]) if w_arr.ndim == 0 else flat.reshape(w_arr.shape)
    target = tol * cmap.diameter
    grid, images = _seed_grid(cmap)
    out = np.empty(flat.size, dtype=complex)
    for i, wi in enumerate(flat):
        order = np.argsort(np.abs(images - wi))[:seeds]
        z = grid[order].copy()
        found = None
        for _ in range(max_steps):
            fz = evaluate_map(cmap, z)
            err = np.abs(fz - wi)
            best = int(np.argmin(err))
            if err[best] < target:
                found = z[best]
                break
            step = (fz - wi) / evaluate_derivative(cmap, z)
            new = z - step
            for _ in range(40):
                outside = np.abs(new) >= 1.0 - 1e-15
                if not outside.any():
                    break
                step[outside] *= 0.5
                new = z - step
            stuck = np.abs(new) >= 1.0 - 1e-15
            new[stuck] = z[stuck]
            z = new
        if found is None:
            raise PreimageNotFound(f"Newton failed for w = {wi:.6g}", w=[wi.real, wi.imag])
        out[i] = found
    return complex(out[0]) if w_arr.ndim == 0 else out.reshape(w_arr.shape)


# Disk geodesics

def geodesic_circle(xi1: complex, xi2: complex) -> Optional[Tuple[complex, float]]:
    """Center and radius of the circle orthogonal to the unit circle through xi1, xi2; None for a diameter."""
    total = xi1 + xi2
    if abs(total) < 1e-9:
        return None
    c = 2.0 * total / abs(total) ** 2
    return c, float(np.sqrt(abs(c) ** 2 - 1.0))


def hyperbolic_geodesic_disk(xi1, xi2, samples: int, spacing: str = "arc") -> np.ndarray:
    """Sampled hyperbolic geodesic from xi1 to xi2 with exact endpoints.

    spacing="arc" is uniform in the circle angle; spacing="graded" is uniform in hyperbolic
    arclength, which crowds samples toward the endpoints.
    """
    xi1 = complex(xi1) / abs(complex(xi1))
    xi2 = complex(xi2) / abs(complex(xi2))
    if abs(xi1 - xi2) < 1e-12:
        raise CoincidentEndpoints("geodesic endpoints coincide", xi=[xi1.real, xi1.imag])
    if samples < 2:
        raise ValueError("samples must be at least 2")
    circle = geodesic_circle(xi1, xi2)

    if spacing == "arc":
        u = np.linspace(0.0, 1.0, samples)
        if circle is None:
            path = xi1 + (xi2 - xi1) * u
        else:
            c, r = circle
            start = np.angle(xi1 - c)
            sweep = np.angle((xi2 - c) / (xi1 - c))
            path = c + r * np.exp(1j * (start + sweep * u))
    elif spacing == "graded":
        radius = circle[1] if circle is not None else np.inf
        floor = min(0.5, 0.005 / np.sqrt(radius)) if np.isfinite(radius) else 0.005
        s_max = np.log(2.0 / floor)
        y = np.tanh(np.linspace(-s_max, s_max, max(samples - 2, 1)) / 2.0) if samples > 2 else np.zeros(0)
        if circle is None:
            inner = -xi1 * y
        else:
            c, r = circle
            a = abs(c) - r
            inner = np.exp(1j * np.angle(c)) * (1j * y + a) / (1.0 + 1j * a * y)
            first = np.exp(1j * np.angle(c)) * (-1j + a) / (1.0 - 1j * a)
            if abs(first - xi1) > abs(first - xi2):
                inner = inner[::-1]
        path = np.concatenate([[xi1], inner, [xi2]])
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    path = np.asarray(path, dtype=complex)
    path[0], path[-1] = xi1, xi2
    return path
