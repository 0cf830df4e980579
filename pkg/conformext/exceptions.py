# conformext/exceptions.py

from typing import Any, Dict, Optional


class ConformextError(Exception):
    """Base error. `exit_code` is the CLI contract, `context` holds numeric diagnostics."""

    exit_code: int = 1

    def __init__(self, detail: str = "", **context: Any):
        self.detail = detail or self.__class__.__name__
        self.context: Dict[str, Any] = context
        super().__init__(self.detail)

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.__class__.__name__, "detail": self.detail, "context": self.context}


class ConfigError(ConformextError):
    pass


# Geometry

class GeometryError(ConformextError):
    pass


class TooFewVertices(GeometryError):
    pass


class DegenerateEdge(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    pass


class PointOutside(GeometryError):
    pass


class DisconnectedAtResolution(GeometryError):
    pass


# Conformal maps

class ConformalError(ConformextError):
    pass


class InvalidNormalization(ConformalError):
    pass


class NonConvergence(ConformalError):
    def __init__(self, detail: str = "", iterations: int = 0, residual: float = float("nan"), **context: Any):
        super().__init__(detail, iterations=iterations, residual=residual, **context)
        self.iterations = iterations
        self.residual = residual


class CrowdingOverflow(ConformalError):
    pass


class OutsideDisk(ConformalError):
    pass


class CoincidentEndpoints(ConformalError):
    pass


class PreimageNotFound(ConformalError):
    pass


# Gauge functions and integrals

class PhiError(ConformextError):
    pass


class NegativeArgument(PhiError):
    pass


class NotIncreasing(PhiError):
    pass


class Inconclusive(PhiError):
    exit_code = 3

    def __init__(self, detail: str = "", budget: int = 0, **context: Any):
        super().__init__(detail, budget=budget, **context)
        self.budget = budget


class IntegrabilityError(ConformextError):
    pass


class QuadratureBudgetExceeded(IntegrabilityError):
    pass


# Crosscuts and extensions

class CrosscutError(ConformextError):
    pass


class NoValidN0(CrosscutError):
    exit_code = 4


class NonMonotoneParametrization(CrosscutError):
    pass


class GapTooWide(CrosscutError):
    pass


class TailDivergent(CrosscutError):
    pass


class CellDegenerate(CrosscutError):
    pass


class OverlapDetected(CrosscutError):
    pass


# Counterexample construction

class CounterexampleError(ConformextError):
    pass


class TailConvergent(CounterexampleError):
    exit_code = 5


class TruncationTooShort(CounterexampleError):
    pass


class GroupExhausted(CounterexampleError):
    pass


class WindowOverflow(CounterexampleError):
    """A single greedy pipe window already sums past 2 l_n."""


class SelfIntersection(SelfIntersecting):
    """Folded layout failed simplicity validation."""


class GuardViolated(CounterexampleError):
    pass


class InsufficientDepth(CounterexampleError):
    def __init__(self, detail: str = "", max_certified: int = 0, **context: Any):
        super().__init__(detail, max_certified=max_certified, **context)
        self.max_certified = max_certified


# Weighted series

class SeriesError(ConformextError):
    pass


class NonPositiveTerm(SeriesError):
    pass


class BudgetExceeded(SeriesError):
    def __init__(self, detail: str = "", witness: Optional[float] = None, **context: Any):
        super().__init__(detail, witness=witness, **context)
        self.witness = witness
