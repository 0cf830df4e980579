# conformext/models/integral_report.py

from enum import Enum
from typing import Dict, List

from .base import FloatArray, RecordModel


class IntegralVerdict(str, Enum):
    FINITE = "finite"
    DIVERGENCE_SUSPECTED = "divergence_suspected"
    INCONCLUSIVE = "inconclusive"


class IntegralReport(RecordModel):
    """Area integral of phi(h(z0, z)) over the domain, accumulated over dyadic annuli.

    `partials[j]` is the running total up to radius `radii[j]`; `value` is the last partial. Only
    finitely many annuli are computed, so divergence is suspected, never certified.
    """

    value: float
    radii: FloatArray
    contributions: FloatArray
    partials: FloatArray
    ratios: FloatArray
    verdict: IntegralVerdict
    phi: str
    map_kind: str
    quadrature: Dict[str, int]

    @property
    def exit_code(self) -> int:
        return {IntegralVerdict.FINITE: 0, IntegralVerdict.DIVERGENCE_SUSPECTED: 2}.get(self.verdict, 3)

    def annulus_rows(self) -> List[list]:
        inner = [0.0] + list(self.radii[:-1])
        return [
            [j + 1, inner[j], float(self.radii[j]), float(self.contributions[j]), float(self.partials[j])]
            for j in range(self.radii.size)
        ]


ANNULUS_COLUMNS = ["j", "r_inner", "r_outer", "contribution", "partial"]
