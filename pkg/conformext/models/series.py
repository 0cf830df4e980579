# conformext/models/series.py

from typing import Optional

from pydantic import validator

from .base import FloatArray, RecordModel


class SeriesProbe(RecordModel):
    """Terms a_1..a_N of a positive series and the weight exponent delta of sum a_n S_n^(delta-1)"""

    terms: FloatArray
    delta: float

    @validator("terms")
    def _one_dimensional(cls, value):
        if value.ndim != 1 or value.size == 0:
            raise ValueError("terms must be a nonempty 1-d sequence")
        return value

    @property
    def size(self) -> int:
        return int(self.terms.size)


class SeriesTable(RecordModel):
    delta: float
    S: FloatArray
    partials: FloatArray

    @property
    def S_N(self) -> float:
        return float(self.S[-1])

    def rows(self):
        return [[n + 1, float(self.S[n]), float(self.partials[n])] for n in range(self.S.size)]


SERIES_COLUMNS = ["n", "S_n", "partial"]


class ProofReplay(RecordModel):
    """Both sides of a_1^d >= S_N^d + (-d) sum_{k=2}^N a_k S_k^(d-1), for every N"""

    delta: float
    lhs: float
    rhs: FloatArray

    @property
    def max_relative_excess(self) -> float:
        return float(((self.rhs - self.lhs) / abs(self.lhs)).max())


class SeriesVerdict(RecordModel):
    kind: str
    delta: float
    N: int
    partial: float
    bound: Optional[float] = None
    full_bound: Optional[float] = None
    witness: Optional[float] = None

    @property
    def converges(self) -> bool:
        return self.kind == "converges"
