# conformext/models/conformal_map.py

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import Field

from .base import ComplexArray, ComplexValue, FloatArray, RecordModel


class MapKind(str, Enum):
    IDENTITY = "closed_form_disk_identity"
    DISK_TO_SQUARE = "closed_form_disk_to_square"
    SCHWARZ_CHRISTOFFEL = "schwarz_christoffel"


class ConformalMap(RecordModel):
    """Riemann map of the unit disk onto a polygon (or the disk itself).

    For the polygonal kinds f(z) = offset + scale * integral_0^z prod_k (1 - t/z_k)^beta_k dt
    with z_k = exp(i * prevertices[k]).
    """

    kind: MapKind
    prevertices: FloatArray = Field(default_factory=lambda: np.zeros(0))
    turning_parameters: FloatArray = Field(default_factory=lambda: np.zeros(0))
    scale: ComplexValue = 1.0 + 0.0j
    offset: ComplexValue = 0.0 + 0.0j
    center_image: ComplexValue = 0.0 + 0.0j
    vertices: ComplexArray = Field(default_factory=lambda: np.zeros(0, dtype=complex))

    # Solver certificate
    residual: float = 0.0
    iterations: int = 0

    @property
    def is_polygonal(self) -> bool:
        return self.kind != MapKind.IDENTITY

    @property
    def prevertex_points(self) -> np.ndarray:
        return np.exp(1j * self.prevertices)

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.size)

    @property
    def diameter(self) -> float:
        if not self.is_polygonal:
            return 2.0
        v = self.vertices
        return float(np.max(np.abs(v[:, None] - v[None, :])))


class MobiusMap(RecordModel):
    """T(z) = a (1 - z) / (1 + z), disk onto the upper half-plane"""

    a: ComplexValue

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.a * (1.0 - z) / (1.0 + z)

    def inverse(self, w):
        w = np.asarray(w, dtype=complex)
        return (self.a - w) / (self.a + w)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return -2.0 * self.a / (1.0 + z) ** 2

    def inverse_derivative(self, w):
        w = np.asarray(w, dtype=complex)
        return -2.0 * self.a / (self.a + w) ** 2


class DiskAutomorphism(RecordModel):
    """m(z) = e^{i rotation} (z - center) / (1 - conj(center) z)"""

    center: ComplexValue
    rotation: float = 0.0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        b = self.center
        return np.exp(1j * self.rotation) * (z - b) / (1.0 - np.conj(b) * z)
