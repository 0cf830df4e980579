# conformext/models/phi.py

from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import Field, root_validator, validator

from .base import FloatArray, RecordModel


class PhiFamily(str, Enum):
    ALPHA_LOG = "alpha_log"
    TABLE = "table"


class TailKind(str, Enum):
    POWER = "power"
    EXPONENTIAL = "exponential"
    ALPHA_LOG = "alpha_log"


class PhiTail(RecordModel):
    """Continuation past the last knot: power t^k, exponential e^{k t} or t(log(e+t))^k"""

    kind: TailKind
    exponent: float = Field(..., ge=0)


class PhiSpec(RecordModel):
    """Gauge function phi: increasing, continuous, phi(0) = 0, unbounded.

    `alpha_log` is t (log(e + t))^alpha. `table` interpolates knots linearly from t = 0 and
    continues the last knot with the declared tail.
    """

    family: PhiFamily
    alpha: float = Field(default=1.0, ge=0)
    knots: Optional[FloatArray] = None
    tail: Optional[PhiTail] = None
    M: Optional[float] = Field(default=None, gt=0)

    @validator("knots")
    def _check_knots(cls, value):
        if value is None:
            return value
        if value.ndim != 2 or value.shape[1] != 2 or value.shape[0] < 2:
            raise ValueError("knots must be a list of at least two [t, phi] pairs")
        if value[0, 0] != 0.0:
            raise ValueError("the first knot must sit at t = 0")
        if np.any(np.diff(value[:, 0]) <= 0) or np.any(np.diff(value[:, 1]) <= 0):
            raise ValueError("knots must be strictly increasing in t and phi")
        if value[0, 1] < 0:
            raise ValueError("phi(0) must be nonnegative")
        return value

    @root_validator(skip_on_failure=True)
    def _check_family(cls, values):
        if values.get("family") == PhiFamily.TABLE and values.get("knots") is None:
            raise ValueError("table family needs knots")
        tail = values.get("tail")
        if tail is not None and tail.kind == TailKind.POWER and tail.exponent <= 0:
            raise ValueError("power tail needs a positive exponent")
        if tail is not None and tail.kind == TailKind.EXPONENTIAL and tail.exponent <= 0:
            raise ValueError("exponential tail needs a positive rate")
        return values

    @property
    def label(self) -> str:
        if self.family == PhiFamily.ALPHA_LOG:
            return f"alpha:{self.alpha:g}"
        tail = f"{self.tail.kind.value}:{self.tail.exponent:g}" if self.tail else "none"
        return f"table[{self.knots.shape[0]} knots, tail {tail}]"

    @property
    def last_knot(self) -> Tuple[float, float]:
        return float(self.knots[-1, 0]), float(self.knots[-1, 1])


class SubadditivityEstimate(RecordModel):
    M_hat: float
    argmax: Tuple[float, float]
    pairs: int
    spec: PhiSpec


class TailVerdict(RecordModel):
    """Outcome of the tail-integral classifier.

    `convergent` carries the integral value (with the geometric tail added); `divergent` carries
    the witness (windows, partial). Window ratios are kept for the report.
    """

    kind: str
    t0: float
    windows: int
    partial: float
    value: Optional[float] = None
    ratios: FloatArray

    @property
    def is_convergent(self) -> bool:
        return self.kind == "convergent"
