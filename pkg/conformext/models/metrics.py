# conformext/models/metrics.py

from typing import List, Optional

from pydantic import Field

from .base import ComplexValue, RecordModel


class MetricSample(RecordModel):
    """One interior pair with its hyperbolic and quasi-hyperbolic distances"""

    z1: ComplexValue
    z2: ComplexValue
    h: float = Field(..., ge=0)
    k: float = Field(..., ge=0)
    geodesic_length: Optional[float] = None
    pitch: float

    @property
    def ratio(self) -> float:
        return self.h / self.k

    def to_row(self) -> list:
        return [
            self.z1.real, self.z1.imag, self.z2.real, self.z2.imag,
            self.h, self.k,
            self.geodesic_length if self.geodesic_length is not None else "",
            self.pitch,
        ]


METRIC_SAMPLE_COLUMNS = ["x1", "y1", "x2", "y2", "h", "k", "geodesic_length", "pitch"]


class ComparabilityReport(RecordModel):
    """h/k statistics over sampled pairs; the [lower_gate, upper_gate] window is a numeric policy"""

    samples: List[MetricSample]
    ratio_min: float
    ratio_median: float
    ratio_max: float
    excluded_pairs: int = 0
    lower_gate: float = 0.25
    upper_gate: float = 4.0
    within_policy: bool
    pitch: float


class GehringHaymanReport(RecordModel):
    xi1: ComplexValue
    xi2: ComplexValue
    geodesic_length: float
    internal_distance: float
    ratio: float
    pitch: float
