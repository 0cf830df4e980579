# conformext/models/run_config.py

import os
from typing import List, Optional

from pydantic import Field, validator

from .base import ComplexValue, RecordModel
from .counterexample import BadParametrizationPlan, Grouping, ProbeReport, VerificationReport
from .crosscut import CrosscutSumTable, ExtensionReport
from .integral_report import IntegralReport
from .metrics import ComparabilityReport

COMMANDS = ("integrability", "extension", "counterexample")
DOMAIN_KEYWORDS = ("disk", "square")


class RunConfig(RecordModel):
    """One CLI invocation, validated before any computation starts."""

    command: str
    domain: str = "square"
    phi: str = "alpha:1"
    basepoint: ComplexValue = 0j
    p: float = 1.5
    depth: int = Field(default=10, ge=1)
    groups: int = Field(default=6, ge=1)
    pitch: float = Field(default=0.02, gt=0)
    # the output folder stays out of report.json
    out: str = Field(default="results", exclude=True)
    seed: int = 0
    truncation: Optional[int] = Field(default=None, ge=2)

    @validator("command")
    def _known_command(cls, value):
        if value not in COMMANDS:
            raise ValueError(f"unknown command {value!r}")
        return value

    @validator("domain")
    def _domain_exists(cls, value):
        if value not in DOMAIN_KEYWORDS and not os.path.isfile(value):
            raise ValueError(f"domain file {value!r} does not exist")
        return value

    @validator("p")
    def _sobolev_exponent(cls, value):
        if not 1.0 <= value < 2.0:
            raise ValueError(f"p={value} must lie in [1, 2)")
        return value


class IntegrabilityRun(RecordModel):
    config: RunConfig
    integral: IntegralReport
    comparability: Optional[ComparabilityReport] = None


class ExtensionRun(RecordModel):
    config: RunConfig
    crosscut_sum: CrosscutSumTable
    extension: ExtensionReport

    @property
    def exit_code(self) -> int:
        return 0 if self.crosscut_sum.convergent else 3


class CounterexampleRun(RecordModel):
    """Both halves side by side: the finite phi-integral bound and the failing extension probe."""

    config: RunConfig
    c_M: float
    grouping: Grouping
    widths: List[float]
    verification: VerificationReport
    parametrization: Optional[BadParametrizationPlan] = None
    probe: Optional[ProbeReport] = None

    @property
    def exit_code(self) -> int:
        """0 when every verification check holds, 3 (inconclusive) otherwise."""
        return 0 if self.verification.passed else 3
