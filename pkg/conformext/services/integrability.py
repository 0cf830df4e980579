# conformext/services/integrability.py

import logging
from typing import Optional

import numpy as np

from ..config import settings
from ..models.conformal_map import ConformalMap
from ..models.integral_report import IntegralReport, IntegralVerdict
from ..models.phi import PhiSpec
from ..utils.quadrature import legendre_rule, windowed_integral
from .conformal import evaluate_derivative
from .phi import phi_eval

logger = logging.getLogger(__name__)

FINITE_RATIO = 0.9
TRAILING_ANNULI = 4


def disk_phi_integral(spec: PhiSpec, tol: float = 1e-10) -> float:
    """Integral over the unit disk of phi(h(0, z)).

    2 pi int_0^1 r phi(log((1+r)/(1-r))) dr, integrated in u = -log(1-r) on doubling windows.
    """

    def integrand(u):
        e = np.exp(-u)
        return (1.0 - e) * phi_eval(spec, u + np.log(2.0 - e)) * e

    value, _ = windowed_integral(integrand, 0.0, 1.0, tol=tol)
    return 2.0 * np.pi * value


def radial_phi_integral(spec: PhiSpec, tol: float = 1e-10) -> float:
    """int_0^1 phi(log(1/(1-r))) dr = int_0^inf phi(u) e^{-u} du"""

    def integrand(u):
        return phi_eval(spec, u) * np.exp(-u)

    value, _ = windowed_integral(integrand, 0.0, 1.0, tol=tol)
    return value


def _annulus_contribution(
    cmap: ConformalMap, spec: PhiSpec, r_lo: float, r_hi: float, theta: np.ndarray, nodes: int
) -> float:
    x, w = legendre_rule(nodes)
    half = 0.5 * (r_hi - r_lo)
    r = r_lo + half * (x + 1.0)
    z = r[:, None] * np.exp(1j * theta)[None, :]
    jac = np.abs(evaluate_derivative(cmap, z.ravel())).reshape(z.shape) ** 2
    h = np.log1p(r) - np.log1p(-r)
    radial = (jac.mean(axis=1) * 2.0 * np.pi) * phi_eval(spec, h) * r
    return float(half * np.dot(w, radial))


def classify_contributions(contributions: np.ndarray) -> IntegralVerdict:
    ratios = contributions[1:] / contributions[:-1]
    trailing = ratios[-TRAILING_ANNULI:]
    if trailing.size < TRAILING_ANNULI:
        return IntegralVerdict.INCONCLUSIVE
    if np.all(trailing < FINITE_RATIO):
        return IntegralVerdict.FINITE
    if np.all(trailing >= 1.0):
        return IntegralVerdict.DIVERGENCE_SUSPECTED
    return IntegralVerdict.INCONCLUSIVE


def phi_hyperbolic_area_integral(
    cmap: ConformalMap,
    spec: PhiSpec,
    radial_levels: Optional[int] = None,
    angular_nodes: Optional[int] = None,
    radial_nodes: int = 16,
) -> IntegralReport:
    """Integral over the domain of phi(h(f(0), w)) dw, pulled back to the disk.

    Annuli end at r_j = 1 - 2^-j; each is integrated with Gauss-Legendre in r and the offset
    trapezoid rule in angle. Contributions are reduced in annulus order.
    """
    levels = radial_levels or settings.radial_levels
    n_theta = angular_nodes or settings.angular_nodes
    theta = (np.arange(n_theta) + 0.5) * (2.0 * np.pi / n_theta)
    radii = 1.0 - 2.0 ** -np.arange(1, levels + 1, dtype=float)
    inner = np.concatenate([[0.0], radii[:-1]])
    contributions = np.array([
        _annulus_contribution(cmap, spec, lo, hi, theta, radial_nodes) for lo, hi in zip(inner, radii)
    ])
    partials = np.cumsum(contributions)
    verdict = classify_contributions(contributions)
    logger.info(
        "area integral of %s over %s: %.8g after %d annuli (%s)",
        spec.label, cmap.kind.value, partials[-1], levels, verdict.value,
    )
    return IntegralReport(
        value=float(partials[-1]),
        radii=radii,
        contributions=contributions,
        partials=partials,
        ratios=contributions[1:] / contributions[:-1],
        verdict=verdict,
        phi=spec.label,
        map_kind=cmap.kind.value,
        quadrature={"radial_levels": levels, "angular_nodes": n_theta, "radial_nodes": radial_nodes},
    )
