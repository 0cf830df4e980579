# conformext/models/__init__.py

from .base import ComplexArray, ComplexValue, FloatArray, IntArray, RecordModel
from .conformal_map import ConformalMap, DiskAutomorphism, MapKind, MobiusMap
from .counterexample import (
    BadParametrizationPlan,
    CounterexamplePlan,
    FoldedLayout,
    Grouping,
    ProbeReport,
    SampledDiskMap,
    SegmentPlan,
    SequenceBundle,
    SpotCheck,
    VerificationReport,
)
from .crosscut import (
    CellDiagnostics,
    Crosscut,
    CrosscutSumTable,
    CycleReport,
    DisjointnessAudit,
    DyadicFamily,
    ExtensionReport,
    GeodesicCellDecomposition,
    LengthBoundReport,
)
from .domain import GridDistance, GridGraph, JordanDomain
from .integral_report import IntegralReport, IntegralVerdict
from .metrics import ComparabilityReport, GehringHaymanReport, MetricSample
from .phi import PhiFamily, PhiSpec, PhiTail, SubadditivityEstimate, TailKind, TailVerdict
from .run_config import CounterexampleRun, ExtensionRun, IntegrabilityRun, RunConfig
from .series import ProofReplay, SeriesProbe, SeriesTable, SeriesVerdict

__all__ = [
    "RecordModel", "FloatArray", "ComplexArray", "ComplexValue", "IntArray",
    "ConformalMap", "MapKind", "MobiusMap", "DiskAutomorphism",
    "JordanDomain", "GridGraph", "GridDistance",
    "MetricSample", "ComparabilityReport", "GehringHaymanReport",
    "PhiSpec", "PhiFamily", "PhiTail", "TailKind", "SubadditivityEstimate", "TailVerdict",
    "IntegralReport", "IntegralVerdict",
    "DyadicFamily", "Crosscut", "CrosscutSumTable", "DisjointnessAudit", "GeodesicCellDecomposition",
    "CellDiagnostics", "LengthBoundReport", "CycleReport", "ExtensionReport",
    "SequenceBundle", "Grouping", "SegmentPlan", "FoldedLayout", "CounterexamplePlan", "SpotCheck",
    "VerificationReport", "BadParametrizationPlan", "SampledDiskMap", "ProbeReport",
    "SeriesProbe", "SeriesTable", "ProofReplay", "SeriesVerdict",
    "RunConfig", "IntegrabilityRun", "ExtensionRun", "CounterexampleRun",
]
