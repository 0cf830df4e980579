# conformext/services/series.py

import logging
from typing import Callable, Optional, Union

import numpy as np

from ..exceptions import BudgetExceeded, NonPositiveTerm
from ..models.series import ProofReplay, SeriesProbe, SeriesTable, SeriesVerdict
from ..utils.summation import compensated_cumsum

logger = logging.getLogger(__name__)

WITNESS_THRESHOLD = 1.0

TermSource = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, list]


def series_probe(terms: TermSource, delta: float, N: Optional[int] = None) -> SeriesProbe:
    """Build a probe from an array of terms or a vectorized index -> term function (indices from 1)."""
    if callable(terms):
        if N is None:
            raise ValueError("a term function needs N")
        values = np.asarray(terms(np.arange(1, N + 1, dtype=float)), dtype=float)
    else:
        values = np.asarray(terms, dtype=float)[:N]
    return SeriesProbe(terms=values, delta=delta)


def _checked_terms(probe: SeriesProbe, N: Optional[int]) -> np.ndarray:
    a = probe.terms if N is None else probe.terms[:N]
    bad = np.flatnonzero(~(a > 0))
    if bad.size:
        raise NonPositiveTerm(f"term a_{bad[0] + 1} = {a[bad[0]]!r} is not positive", index=int(bad[0] + 1))
    return a


def weighted_partial_sums(probe: SeriesProbe, N: Optional[int] = None) -> SeriesTable:
    """Compensated partial sums of a_n S_n^(delta-1), together with S_n."""
    a = _checked_terms(probe, N)
    S = compensated_cumsum(a)
    partials = compensated_cumsum(a * S ** (probe.delta - 1.0))
    return SeriesTable(delta=probe.delta, S=S, partials=partials)


def replay_proof_bound(probe: SeriesProbe, N: Optional[int] = None) -> ProofReplay:
    delta = probe.delta
    a = _checked_terms(probe, N)
    S = compensated_cumsum(a)
    weighted = a * S ** (delta - 1.0)
    weighted[0] = 0.0
    rhs = S ** delta + (-delta) * compensated_cumsum(weighted)
    return ProofReplay(delta=delta, lhs=float(a[0] ** delta), rhs=rhs)


def divergence_witness(probe: SeriesProbe, N: Optional[int] = None) -> np.ndarray:
    """log S_n - log a_1 for every n; bounds sum_{k<n} a_{k+1}/S_k from below"""
    a = _checked_terms(probe, N)
    return np.log(compensated_cumsum(a)) - np.log(a[0])


def harmonic_number(N: int) -> float:
    return float(compensated_cumsum(1.0 / np.arange(1, N + 1, dtype=float))[-1])


def classify_weighted_series(
    probe: SeriesProbe, budget: Optional[int] = None, threshold: float = WITNESS_THRESHOLD
) -> SeriesVerdict:
    """Converges for delta < 0 with the telescoping bound; Diverges for delta >= 0 once the
    log-telescoping witness passes `threshold` within `budget` terms (the terms are assumed to
    have a divergent sum)."""
    N = probe.size if budget is None else min(budget, probe.size)
    table = weighted_partial_sums(probe, N)
    partial = float(table.partials[-1])
    a1 = float(probe.terms[0])
    if probe.delta < 0:
        bound = a1 ** probe.delta / (-probe.delta)
        return SeriesVerdict(
            kind="converges", delta=probe.delta, N=N, partial=partial,
            bound=bound, full_bound=a1 ** probe.delta * (1.0 + 1.0 / (-probe.delta)),
        )
    witness = float(np.log(table.S_N) - np.log(a1))
    if witness < threshold:
        raise BudgetExceeded(
            f"witness {witness:.6g} below {threshold:g} after {N} terms", witness=witness, N=N,
        )
    logger.debug("weighted series (delta=%g) diverges: witness %.6g at N=%d", probe.delta, witness, N)
    return SeriesVerdict(kind="diverges", delta=probe.delta, N=N, partial=partial, witness=witness)
