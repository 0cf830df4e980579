# conformext/models/counterexample.py

from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field

from .base import ComplexArray, ComplexValue, FloatArray, IntArray, RecordModel
from .domain import JordanDomain
from .phi import PhiSpec, TailVerdict
from .series import SeriesVerdict


class SequenceBundle(RecordModel):
    """a_n = (1/phi(n)) S_n^(-2/3) and b_n = a_0 + ... + a_{n-1}, indexed from 0 with a_0 = 0.

    `b` has length N + 2 so that b[n] is defined for n = 0..N+1.
    """

    N: int
    a: FloatArray
    b: FloatArray
    S: FloatArray
    c_M: float
    c_M_index: int
    nonincreasing: bool
    M: float
    tail: TailVerdict
    witness: Optional[SeriesVerdict] = None

    @property
    def ratios(self) -> np.ndarray:
        return self.a[1:self.N] / self.a[2:self.N + 1]

    @property
    def ratio_bound(self) -> float:
        return 2.0 ** (5.0 / 3.0) * self.M

    @property
    def ratio_bound_holds(self) -> bool:
        return self.c_M <= self.ratio_bound


class Grouping(RecordModel):
    """Grouping indices i_1..i_{levels+1} for the normalized sequence (sum of squares 1/3).

    The tail beyond N is a power law a_k^2 ~ a_N^2 (k/N)^(-q) fitted on the last octave.
    """

    levels: int
    scale: float
    tail_exponent: float
    tail_mass: float
    i: IntArray
    masses: FloatArray
    merged: List[int]

    def i_at(self, n: int) -> int:
        return int(self.i[n - 1])

    def group(self, n: int) -> Tuple[int, int]:
        """Inclusive index range of group n (empty when i_{n+1} = i_n)."""
        return self.i_at(n) + 1, self.i_at(n + 1)

    @property
    def mass_bounds(self) -> np.ndarray:
        return 4.0 ** -(np.arange(1, self.levels + 1) - 1.0)

    @property
    def mass_bound_holds(self) -> bool:
        return bool(np.all(self.masses <= self.mass_bounds * (1.0 + 1e-12)))


class SegmentPlan(RecordModel):
    """Pipes of group n: windows [start, end) of trapezoid indices separated by guard runs.

    `entry_guard` precedes the first window; `guards[d]` follows window d.
    """

    n: int
    level_length: float
    entry_guard: int = 0
    m: List[int]
    guards: List[int]
    windows: List[Tuple[int, int]]
    window_sums: FloatArray
    final_short: bool = False

    @property
    def K(self) -> int:
        return len(self.m)

    @property
    def first_index(self) -> int:
        return self.windows[0][0] - self.entry_guard

    @property
    def last_start(self) -> int:
        return self.windows[-1][0]

    def window_violations(self) -> List[int]:
        """Interior windows whose sum leaves [l_n/2, 2 l_n]."""
        lo, hi = 0.5 * self.level_length, 2.0 * self.level_length
        interior = self.window_sums[:-1]
        return [d for d, s in enumerate(interior) if not (lo <= s <= hi)]


class FoldedLayout(RecordModel):
    """Serpentine tube: gates (cross-sections) from the cap to the far end, walls as a polygon.

    Gate k joins `right[k]` to `left[k]`; cell k lies between gates k-1 and k. `tags[k]` is
    the group level of the cell ending at gate k (0 for the straight lead run) and
    `indices[k]` the trapezoid index, -1 inside turns.
    """

    domain: JordanDomain
    cap_radius: float
    base: ComplexValue = 0j
    left: ComplexArray
    right: ComplexArray
    tags: IntArray
    indices: IntArray
    groups: List[int]
    group_ends: IntArray
    lead_end: int
    widths: FloatArray
    heights: FloatArray
    clearances: FloatArray

    @property
    def n_gates(self) -> int:
        return int(self.left.size)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.left + self.right)

    @property
    def end_point(self) -> complex:
        return complex(self.centers[-1])

    @property
    def level_lengths(self) -> np.ndarray:
        return 2.0 ** -np.asarray(self.groups, dtype=float)

    @property
    def width_constants(self) -> np.ndarray:
        return self.widths / self.level_lengths

    @property
    def width_constant(self) -> float:
        return float(self.width_constants.max())

    @property
    def width_sum(self) -> float:
        return float(self.widths.sum())


class CounterexamplePlan(RecordModel):
    """Everything needed to rebuild and audit the folded trapezoid domain."""

    spec: PhiSpec
    N: int
    sequences: SequenceBundle
    scale: float
    a: FloatArray
    b: FloatArray
    c_M: float
    l: FloatArray
    grouping: Grouping
    segments: List[SegmentPlan]
    layout: FoldedLayout

    @property
    def i(self) -> np.ndarray:
        return self.grouping.i

    @property
    def w(self) -> np.ndarray:
        return self.layout.widths


class SpotCheck(RecordModel):
    n: int
    point: ComplexValue
    grid_k: float
    chain_k: float

    @property
    def ratio(self) -> float:
        return self.grid_k / self.chain_k

    @property
    def within_factor(self) -> bool:
        return 0.25 <= self.ratio <= 4.0


class VerificationReport(RecordModel):
    """Convergent weighted square sum, growing internal diameter and a bounded phi(k) integral."""

    square_sum: SeriesVerdict
    square_partial: float
    square_increment: float
    square_converged: bool
    diameters: FloatArray
    diameter_upper: FloatArray
    tube_lengths: FloatArray
    trapezoid_integrals: FloatArray
    integral_partials: FloatArray
    cap_term: float
    integral_bound: float
    spot_checks: List[SpotCheck] = Field(default_factory=list)
    tail_model: str = "power"

    @property
    def growth_ratios(self) -> np.ndarray:
        return np.diff(self.diameters) / self.tube_lengths[1:]

    @property
    def diameter_grows(self) -> bool:
        return bool(np.all(self.growth_ratios >= 0.9))

    @property
    def integral_bounded(self) -> bool:
        return bool(self.integral_partials[-1] <= self.integral_bound)

    @property
    def passed(self) -> bool:
        return self.square_converged and self.diameter_grows and self.integral_bounded

    def failures(self) -> List[str]:
        checks = {
            "square_converged": self.square_converged,
            "diameter_grows": self.diameter_grows,
            "integral_bounded": self.integral_bounded,
        }
        return [name for name, ok in checks.items() if not ok]


class BadParametrizationPlan(RecordModel):
    """Monotone circle map sending the arcs A_n onto boundary intervals far from the base.

    Angles tau in [0, 2 pi] of the reference run linearly in arc length from `s_start` to the
    accumulation point `s0` (tau = pi) and on around the boundary back to `s_start`. `knots`
    maps circle angles to reference angles; `arc_knots` to arc-length angles 2 pi s / P.
    """

    N: int
    max_certified: int
    reference: str
    period: float
    s_start: float
    s0: float
    omega0: ComplexValue
    offset: float
    unit: float
    d_max: float
    t: FloatArray
    delta: FloatArray
    source_arcs: FloatArray
    certified: FloatArray
    knots: FloatArray
    arc_knots: FloatArray

    @property
    def thresholds(self) -> np.ndarray:
        n = np.arange(1, self.t.size + 1, dtype=float)
        return self.offset + self.unit * 4.0 ** n

    @property
    def arc_measures(self) -> np.ndarray:
        return self.source_arcs[:, 1] - self.source_arcs[:, 0]

    @property
    def intervals(self) -> np.ndarray:
        return np.column_stack([self.t - self.delta, self.t + self.delta])


class SampledDiskMap(RecordModel):
    """Values of a disk map on a polar grid: values[i, j] = Phi(radii[i] e^{i angles[j]})."""

    radii: FloatArray
    angles: FloatArray
    values: ComplexArray

    def along_radius(self, theta: np.ndarray) -> np.ndarray:
        """Values at every radius and the given angles (periodic linear interpolation)."""
        theta = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
        out = np.empty((self.radii.size, theta.size), dtype=complex)
        for i, row in enumerate(self.values):
            out[i] = (
                np.interp(theta, self.angles, row.real, period=2.0 * np.pi)
                + 1j * np.interp(theta, self.angles, row.imag, period=2.0 * np.pi)
            )
        return out


class ProbeReport(RecordModel):
    """Partial sums of L_n = eta |A_n| (min internal distance over Phi(A_n) - D_eta)_+"""

    eta: float
    d_eta: float
    n: List[int]
    L: FloatArray
    partials: FloatArray
    radial: Optional[FloatArray] = None
    excluded: List[int] = Field(default_factory=list)

    @property
    def increments(self) -> np.ndarray:
        return self.L

    @property
    def growth(self) -> bool:
        """Increments bounded below: at least three of them and none below a quarter of the largest"""
        if self.L.size < 3 or self.L.min() <= 0:
            return False
        return bool(self.L.min() >= 0.25 * self.L.max())
