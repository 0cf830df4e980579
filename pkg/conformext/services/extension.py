# conformext/services/extension.py

import logging
from typing import Optional, Tuple

import numpy as np

from ..exceptions import CellDegenerate, OverlapDetected
from ..models.conformal_map import ConformalMap
from ..models.crosscut import DyadicFamily, ExtensionReport
from ..utils.quadrature import legendre_rule
from .boundary import BoundaryParametrization
from .conformal import boundary_trace, evaluate_derivative, evaluate_map
from .crosscuts import FamilyImages, audit_family

logger = logging.getLogger(__name__)

CELL_MODELS = ("geodesic", "annulus")
_CELL_CHUNK = 512


def graded_rule(levels: int, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre on [0, 1] with panels halving toward both ends."""
    inner = 2.0 ** -np.arange(levels, 0, -1, dtype=float)
    breaks = np.concatenate([[0.0], inner, 1.0 - inner[::-1][1:], [1.0]])
    x, w = legendre_rule(nodes)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    u = lo + 0.5 * (hi - lo) * (x[None, :] + 1.0)
    wu = 0.5 * (hi - lo) * w[None, :]
    return u.ravel(), wu.ravel()


def vertex_rule(levels: int, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """graded_rule pulled through u = sin^2(pi t / 2).

    The boundary geodesic of an ideal polygon leaves each vertex like a square root of the angle;
    the substitution turns that into an analytic integrand.
    """
    t, wt = graded_rule(levels, nodes)
    return np.sin(0.5 * np.pi * t) ** 2, 0.5 * np.pi * np.sin(np.pi * t) * wt


def geodesic_curves(start: np.ndarray, end: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Points and u-derivatives of the disk geodesics e^{i start} -> e^{i end}, uniform in circle angle.

    Returns arrays of shape (len(start), len(u)).
    """
    p = np.exp(1j * np.asarray(start, dtype=float))[:, None]
    q = np.exp(1j * np.asarray(end, dtype=float))[:, None]
    total = p + q
    straight = np.abs(total) < 1e-9
    safe = np.where(straight, 1.0, total)
    c = 2.0 * safe / np.abs(safe) ** 2
    radius = np.sqrt(np.abs(c) ** 2 - 1.0)
    begin = np.angle(p - c)
    sweep = np.angle((q - c) / (p - c))
    arc = c + radius * np.exp(1j * (begin + sweep * u[None, :]))
    d_arc = 1j * sweep * (arc - c)
    line = p + (q - p) * u[None, :]
    d_line = np.broadcast_to(q - p, line.shape)
    return np.where(straight, line, arc), np.where(straight, d_line, d_arc)


def _cell_curves(start_p, end_p, start_c, end_c, u):
    """Parent curve on s in [0, 1] and concatenated children (each child on half of the range)."""
    s = np.concatenate([0.5 * u, 0.5 + 0.5 * u])
    zp, dzp = geodesic_curves(start_p, end_p, s)
    za, dza = geodesic_curves(start_c[0::2], end_c[0::2], u)
    zb, dzb = geodesic_curves(start_c[1::2], end_c[1::2], u)
    zc = np.concatenate([za, zb], axis=1)
    dzc = 2.0 * np.concatenate([dza, dzb], axis=1)
    return zp, dzp, zc, dzc


def _annulus_cells(n: int, start: np.ndarray, end: np.ndarray, u: np.ndarray):
    s = np.concatenate([0.5 * u, 0.5 + 0.5 * u])
    theta = start[:, None] + (end - start)[:, None] * s[None, :]
    e = np.exp(1j * theta)
    rho_in, rho_out = 1.0 - 2.0 ** -n, 1.0 - 2.0 ** -(n + 1)
    d_theta = (end - start)[:, None]
    return rho_in * e, 1j * rho_in * d_theta * e, rho_out * e, 1j * rho_out * d_theta * e


def _image_curve(cmap: ConformalMap, z: np.ndarray, dz: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    flat = z.ravel()
    return evaluate_map(cmap, flat).reshape(z.shape), evaluate_derivative(cmap, flat).reshape(z.shape) * dz


def _ruled_energy(zp, dzp, zc, dzc, Gp, dGp, Gc, dGc, ws, r, wr, p):
    """Energy of the ruled map (1-r) Gp + r Gc over the ruled disk region (1-r) zp + r zc.

    Returns per-cell energy and the smallest orientation ratio det(DPhi)/|DPhi|^2 per cell.
    """
    energy = np.zeros(zp.shape[0])
    worst = np.full(zp.shape[0], np.inf)
    z_r = zc - zp
    phi_r = Gc - Gp
    for rk, wk in zip(r, wr):
        z_s = (1.0 - rk) * dzp + rk * dzc
        phi_s = (1.0 - rk) * dGp + rk * dGc
        D = z_s * np.conj(z_r) - np.conj(z_s) * z_r
        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = (phi_s * np.conj(z_r) - np.conj(z_s) * phi_r) / D
            beta = (z_s * phi_r - phi_s * z_r) / D
        norm = np.abs(alpha) + np.abs(beta)
        area = 0.5 * np.abs(D)
        good = area > 0
        contrib = np.where(good, area * norm ** p, 0.0)
        energy += wk * (contrib @ ws)
        orient = np.where(good, (np.abs(alpha) ** 2 - np.abs(beta) ** 2) / np.maximum(norm ** 2, 1e-300), np.inf)
        worst = np.minimum(worst, orient.min(axis=1))
    return energy, worst


def _conformal_cell_energy(cmap, zp, dzp, zc, dzc, ws, r, wr, p):
    """Integral of |f'|^p over the ruled region (1-r) zp + r zc."""
    energy = np.zeros(zp.shape[0])
    z_r = zc - zp
    for rk, wk in zip(r, wr):
        z = (1.0 - rk) * zp + rk * zc
        z_s = (1.0 - rk) * dzp + rk * dzc
        area = np.abs((np.conj(z_s) * z_r).imag)
        fp = np.abs(evaluate_derivative(cmap, z.ravel())).reshape(z.shape)
        energy += wk * ((area * fp ** p) @ ws)
    return energy


def ideal_polygon_energy(cmap: ConformalMap, xi: np.ndarray, p: float, levels: int = 5, nodes: int = 6) -> float:
    """Integral of |f'|^p over the ideal polygon with vertices e^{i xi_j} (xi increasing)."""
    start = np.asarray(xi, dtype=float)
    end = np.append(start[1:], start[0] + 2.0 * np.pi)
    u, wu = vertex_rule(levels, nodes)
    theta = start[:, None] + (end - start)[:, None] * u[None, :]
    w_theta = (end - start)[:, None] * wu[None, :]
    total = start + end
    mid = np.exp(0.5j * total)[:, None]
    half = 0.5 * (end - start)[:, None]
    # geodesic circle: center along the arc midpoint at distance sec(half), radius tan(half)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = mid / np.cos(half)
        proj = (c * np.exp(-1j * theta)).real
        rho = proj - np.sqrt(np.maximum(proj ** 2 - 1.0, 0.0))
    rho = np.where(half < 0.5 * np.pi - 1e-9, rho, 0.0)
    v, wv = graded_rule(levels, nodes)
    z = rho[..., None] * v[None, None, :] * np.exp(1j * theta)[..., None]
    fp = np.abs(evaluate_derivative(cmap, z.ravel())).reshape(z.shape)
    radial = (fp ** p * v[None, None, :]) @ wv
    return float(np.sum(w_theta * rho ** 2 * radial))


def disk_energy(cmap: ConformalMap, radius: float, p: float, angular: int = 256, nodes: int = 16) -> float:
    """Integral of |f'|^p over |z| < radius."""
    x, w = legendre_rule(nodes)
    r = 0.5 * radius * (x + 1.0)
    theta = (np.arange(angular) + 0.5) * (2.0 * np.pi / angular)
    z = r[:, None] * np.exp(1j * theta)[None, :]
    fp = np.abs(evaluate_derivative(cmap, z.ravel())).reshape(z.shape)
    return float(0.5 * radius * np.dot(w, (fp ** p).mean(axis=1) * 2.0 * np.pi * r))


def build_extension(
    cmap: ConformalMap,
    param: BoundaryParametrization,
    family: DyadicFamily,
    N: Optional[int] = None,
    p: float = 1.5,
    model: str = "geodesic",
    images: Optional[FamilyImages] = None,
    levels: int = 5,
    nodes: int = 6,
    r_nodes: int = 8,
    strict: bool = False,
    audit: bool = True,
) -> ExtensionReport:
    """Finite-depth extension of `param` into the disk and its p-energy.

    Cells of generation n (n0 <= n < N) are filled by the ruled blend (1-r) Gamma_{n,j} + r (Gamma_{n+1,2j}
    followed by Gamma_{n+1,2j+1}). On the disk side a cell is either the ideal triangle between the
    matching parameter geodesics (`geodesic`) or the dyadic annulus box over I_{n,j} (`annulus`).
    The core region below generation n0 carries the conformal map itself.
    """
    if model not in CELL_MODELS:
        raise ValueError(f"unknown cell model {model!r}")
    N = family.N if N is None else min(N, family.N)
    own = np.array_equal(family.xi_at(family.N), family.params_at(family.N))
    u, wu = graded_rule(levels, nodes)
    ws = np.concatenate([0.5 * wu, 0.5 * wu])
    xr, wr = legendre_rule(r_nodes)
    r, wr = 0.5 * (xr + 1.0), 0.5 * wr

    xi_n0 = family.xi_at(family.n0)
    if model == "geodesic":
        inner = ideal_polygon_energy(cmap, xi_n0, p, levels, nodes)
    else:
        inner = disk_energy(cmap, 1.0 - 2.0 ** -family.n0, p)
    direct_inner = ideal_polygon_energy(cmap, xi_n0, p, levels, nodes)

    cell_energies = []
    direct_cells = []
    overlaps = []
    for n in range(family.n0, N):
        xs, xe = family.xi_pairs(n)
        xcs, xce = family.xi_pairs(n + 1)
        if np.min(xe - xs) < 1e-12:
            raise CellDegenerate(f"crosscut endpoints coincide in generation {n}", n=n)
        ts, te = family.arcs(n)
        tcs, tce = family.arcs(n + 1)
        gen_energy = np.empty(xs.size)
        gen_direct = np.empty(xs.size)
        for lo in range(0, xs.size, _CELL_CHUNK):
            sl = slice(lo, lo + _CELL_CHUNK)
            csl = slice(2 * lo, 2 * (lo + _CELL_CHUNK))
            zp, dzp, zc, dzc = _cell_curves(xs[sl], xe[sl], xcs[csl], xce[csl], u)
            Gp, dGp = _image_curve(cmap, zp, dzp)
            Gc, dGc = _image_curve(cmap, zc, dzc)
            if model == "annulus":
                dp, ddp, dc, ddc = _annulus_cells(n, ts[sl], te[sl], u)
            elif own:
                dp, ddp, dc, ddc = zp, dzp, zc, dzc
            else:
                dp, ddp, dc, ddc = _cell_curves(ts[sl], te[sl], tcs[csl], tce[csl], u)
            energy, worst = _ruled_energy(dp, ddp, dc, ddc, Gp, dGp, Gc, dGc, ws, r, wr, p)
            gen_energy[sl] = energy
            gen_direct[sl] = _conformal_cell_energy(cmap, zp, dzp, zc, dzc, ws, r, wr, p)
            overlaps.extend((n, lo + int(j)) for j in np.flatnonzero(worst < -1e-9))
        cell_energies.append(gen_energy)
        direct_cells.append(gen_direct)
        logger.debug("generation %d: cell energy %.6g", n, gen_energy.sum())

    if overlaps and strict:
        raise OverlapDetected(f"{len(overlaps)} cells reverse orientation", cells=overlaps[:20])
    if overlaps:
        logger.warning("%d extension cells reverse orientation", len(overlaps))

    depths = list(range(family.n0, N + 1))
    energies = inner + np.concatenate([[0.0], np.cumsum([e.sum() for e in cell_energies])])
    direct = direct_inner + float(sum(d.sum() for d in direct_cells))

    xi_N = family.xi_at(N)
    mismatch = float(np.max(np.abs(boundary_trace(cmap, xi_N) - param(family.params_at(N)))))
    report = ExtensionReport(
        p=p, n0=family.n0, N=N, model=model, depths=depths, energies=energies, inner_energy=inner,
        cell_energies=cell_energies, direct_energy=direct, endpoint_mismatch=mismatch, overlaps=overlaps,
        audit=audit_family(images or FamilyImages(cmap, family), N) if audit else None,
    )
    logger.info("extension energy E_%g(%d) = %.6g (direct %.6g)", p, N, energies[-1], direct)
    return report
