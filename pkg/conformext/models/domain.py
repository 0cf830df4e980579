# conformext/models/domain.py

from typing import Any, Optional, Tuple

import numpy as np
from pydantic import Field

from .base import FloatArray, IntArray, RecordModel


class JordanDomain(RecordModel):
    """Counterclockwise simple polygon. Build through `services.geometry.build_polygon_domain`."""

    vertices: FloatArray
    resolution_hint: float = Field(default=0.02, gt=0)

    @property
    def bbox(self) -> Tuple[float, float, float, float]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Edge start and end points, shape (n, 2) each."""
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    @property
    def complex_vertices(self) -> np.ndarray:
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def to_record(self) -> dict:
        return {"vertices": self.vertices.tolist(), "resolution_hint": self.resolution_hint}


class GridGraph(RecordModel):
    """8-neighbor grid strictly inside a domain, with optional attached points."""

    pitch: float
    nodes: FloatArray
    edge_u: IntArray
    edge_v: IntArray
    edge_lengths: FloatArray
    node_weights: FloatArray
    n_grid: int
    attached: Optional[Any] = None

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.shape[0])


class GridDistance(RecordModel):
    value: float
    pitch: float
    nodes: int
