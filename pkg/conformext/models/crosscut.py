# conformext/models/crosscut.py

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import Field

from .base import ComplexArray, ComplexValue, FloatArray, RecordModel


class DyadicFamily(RecordModel):
    """Generations n0..N of dyadic parameter arcs and the preimage angles of their endpoints.

    `params[k]` holds theta_{n,j} = theta0 + 2 pi j / 2^n for n = n0 + k; `xi[k]` the matching
    angles of f^-1(param(theta_{n,j})), increasing in j.
    """

    n0: int = Field(..., ge=1)
    N: int
    theta0: float = 0.0
    parametrization: str
    params: List[FloatArray]
    xi: List[FloatArray]
    max_gaps: FloatArray

    @property
    def generations(self) -> range:
        return range(self.n0, self.N + 1)

    def params_at(self, n: int) -> np.ndarray:
        return self.params[n - self.n0]

    def xi_at(self, n: int) -> np.ndarray:
        return self.xi[n - self.n0]

    def arcs(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """Start and end angles of I_{n,j}, j = 0..2^n-1."""
        theta = self.params_at(n)
        return theta, np.append(theta[1:], theta[0] + 2.0 * np.pi)

    def xi_pairs(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        xi = self.xi_at(n)
        return xi, np.append(xi[1:], xi[0] + 2.0 * np.pi)


class Crosscut(RecordModel):
    n: int
    j: int
    xi1: ComplexValue
    xi2: ComplexValue
    polyline: ComplexArray
    length: float
    refined_length: Optional[float] = None

    @property
    def chord(self) -> float:
        return float(abs(self.polyline[-1] - self.polyline[0]))

    @property
    def refinement_change(self) -> Optional[float]:
        if self.refined_length is None:
            return None
        return abs(self.refined_length - self.length) / self.refined_length


class CrosscutSumTable(RecordModel):
    """T_n = 2^((p-2) n) sum_j l(Gamma_{n,j})^p and its partial sums S_p(n)"""

    p: float
    n0: int
    N: int
    generations: List[int]
    terms: FloatArray
    partials: FloatArray
    ratios: FloatArray
    convergent: bool
    lengths: List[FloatArray]

    @property
    def trailing_ratio(self) -> float:
        return float(self.ratios[-1])

    def length_rows(self) -> List[list]:
        return [
            [n, j, float(value)]
            for n, row in zip(self.generations, self.lengths)
            for j, value in enumerate(row)
        ]


CROSSCUT_COLUMNS = ["n", "j", "length"]


class DisjointnessAudit(RecordModel):
    polylines: int
    crossings: int
    offenders: List[Tuple[int, int]]

    @property
    def passed(self) -> bool:
        return self.crossings == 0


class GeodesicCellDecomposition(RecordModel):
    """Whitney-type cells along a short geodesic, in upper half-plane coordinates.

    For m >= 1, A_m = {r e^{i t}: R_m < r <= 1, theta_{m+1} < t < theta_m}, C_m is the arc of the
    unit circle over the same angles and z_m = e^{i theta_m}; A_{-m} is the mirror under
    w -> -conj(w). Disk points are recovered through z = T^{-1}(w) * conj(rotation).
    """

    xi1: ComplexValue
    xi2: ComplexValue
    m_max: int
    rotation: ComplexValue
    a: ComplexValue
    theta: FloatArray
    R: FloatArray

    @property
    def indices(self) -> List[int]:
        return [m for k in range(1, self.m_max + 1) for m in (k, -k)]

    def angles(self, m: int) -> Tuple[float, float]:
        k = abs(m)
        lo, hi = float(self.theta[k]), float(self.theta[k - 1])
        return (lo, hi) if m > 0 else (np.pi - hi, np.pi - lo)

    def radius(self, m: int) -> float:
        return float(self.R[abs(m) - 1])

    def corner(self, m: int) -> complex:
        z = np.exp(1j * self.theta[abs(m) - 1])
        return complex(z if m > 0 else -np.conj(z))

    def area(self, m: int) -> float:
        lo, hi = self.angles(m)
        R = self.radius(m)
        return 0.5 * (hi - lo) * (1.0 - R * R)

    def to_disk(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return (self.a - w) / (self.a + w) * np.conj(self.rotation)

    def to_disk_derivative(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return -2.0 * self.a / (self.a + w) ** 2 * np.conj(self.rotation)


class CellDiagnostics(RecordModel):
    m: int
    disk_area: float
    image_area: float
    arc_length: float
    derivative_modulus: float
    c1: float
    c2: float
    phi_integral: float
    phi_lower_bound: float

    @property
    def lower_bound_holds(self) -> bool:
        return self.phi_integral >= self.phi_lower_bound * (1.0 - 1e-9)


class LengthBoundReport(RecordModel):
    """l(Gamma)^2 against (tail integral of 1/phi) x (integral of phi(h) over the region under Gamma)"""

    lhs: float
    length: float
    tail_integral: float
    delta_integral: float
    cells_integral: float
    empirical_c: float
    m_max: int
    cells: List[CellDiagnostics]

    @property
    def rhs_factors(self) -> Dict[str, float]:
        return {
            "tail_integral": self.tail_integral,
            "cells_integral": self.cells_integral,
            "delta_integral": self.delta_integral,
        }


class CycleReport(RecordModel):
    points: ComplexArray
    lengths: FloatArray
    sum_squares: float
    K: int
    diam_bound: float

    def arc_length_between(self, i: int, j: int) -> float:
        """Total crosscut length along the cycle from point i forward to point j"""
        k = self.lengths.size
        idx = [(i + s) % k for s in range((j - i) % k)]
        return float(self.lengths[idx].sum())


class ExtensionReport(RecordModel):
    """Finite-depth extension energies E_p(depth) = inner + sum of cell energies below depth"""

    p: float
    n0: int
    N: int
    model: str
    depths: List[int]
    energies: FloatArray
    inner_energy: float
    cell_energies: List[FloatArray]
    direct_energy: Optional[float] = None
    endpoint_mismatch: float
    overlaps: List[Tuple[int, int]]
    audit: Optional[DisjointnessAudit] = None

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.energies) / self.energies[1:]
