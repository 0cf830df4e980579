# conformext/services/counterexample.py

import logging
from typing import List, Optional, Sequence

import numpy as np

from ..config import settings
from ..exceptions import (
    BudgetExceeded,
    GroupExhausted,
    TailConvergent,
    TruncationTooShort,
    WindowOverflow,
)
from ..models.counterexample import (
    CounterexamplePlan,
    Grouping,
    SegmentPlan,
    SequenceBundle,
    SpotCheck,
    VerificationReport,
)
from ..models.phi import PhiSpec
from ..utils.quadrature import laguerre_rule
from ..utils.summation import compensated_cumsum, compensated_sum
from .integrability import radial_phi_integral
from .layout import TubeDistanceOracle, fold_layout, unfolded_chain
from .metrics import quasi_hyperbolic_table
from .phi import classify_tail_integral, estimate_subadditivity_M, phi_eval
from .series import classify_weighted_series, series_probe

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 100_000
SQUARE_SUM_TOTAL = 1.0 / 3.0
INCREMENT_TOLERANCE = 1e-6
GUARD_FACTOR = 3.0
SPOT_CHECKS = 3


def base_sequences(spec: PhiSpec, N: int = DEFAULT_TRUNCATION, tail_budget: Optional[int] = None) -> SequenceBundle:
    """a_n = (1/phi(n)) (sum_{k<=n} 1/phi(k))^(-2/3) with a_0 = 0, the cumulative b_n and c_M.

    Requires a divergent tail integral of 1/phi; the divergence of sum a_n is witnessed by the
    weighted series with delta = 1/3.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    tail = classify_tail_integral(spec, budget=tail_budget)
    if tail.is_convergent:
        raise TailConvergent(
            f"the integral of 1/phi converges for {spec.label}; the construction needs it to diverge",
            value=tail.value,
        )
    n = np.arange(1, N + 1, dtype=float)
    x = 1.0 / phi_eval(spec, n)
    S = compensated_cumsum(x)
    a = np.concatenate([[0.0], x * S ** (-2.0 / 3.0)])
    b = np.concatenate([[0.0], compensated_cumsum(a)])
    ratios = a[1:N] / a[2:N + 1]
    k = int(np.argmax(ratios))

    M = estimate_subadditivity_M(spec).M_hat
    try:
        witness = classify_weighted_series(series_probe(x, 1.0 / 3.0))
    except BudgetExceeded as err:
        logger.warning("divergence witness for sum a_n not reached at N=%d: %s", N, err.detail)
        witness = None

    bundle = SequenceBundle(
        N=N,
        a=a,
        b=b,
        S=np.concatenate([[0.0], S]),
        c_M=float(ratios[k]),
        c_M_index=k + 1,
        nonincreasing=bool(np.all(np.diff(a[1:]) <= 0)),
        M=M,
        tail=tail,
        witness=witness,
    )
    logger.info("sequences for %s: a_1=%.6g, c_M=%.6g at n=%d, b_N=%.6g", spec.label, a[1], bundle.c_M, k + 1, b[-1])
    return bundle


def grouping_indices(a: np.ndarray, levels: int, N: Optional[int] = None) -> Grouping:
    """i_n = the largest i with sum_{k>=i} a_k^2 >= sum_{k>n} 4^-k, after scaling sum a_k^2 to 1/3."""
    a = np.asarray(a, dtype=float)
    N = a.size - 1 if N is None else N
    squares = a[1:N + 1] ** 2
    k1 = N // 2
    q = float(np.log(a[k1] ** 2 / a[N] ** 2) / np.log(N / k1))
    if not q > 1.0:
        raise TruncationTooShort(f"tail exponent {q:.4g} does not give a finite square sum", exponent=q, N=N)
    tail = float(a[N] ** 2 * N / (q - 1.0))
    scale = float(np.sqrt(SQUARE_SUM_TOTAL / (compensated_sum(squares) + tail)))

    hat2 = squares * scale ** 2
    tail_hat = tail * scale ** 2
    # T[i - 1] = sum_{k >= i} hat_a_k^2 for i = 1..N+1
    T = np.concatenate([compensated_cumsum(hat2[::-1])[::-1], [0.0]]) + tail_hat

    i = []
    for n in range(1, levels + 2):
        target = 4.0 ** -n / 3.0
        count = int(np.searchsorted(-T, -target, side="right"))
        if count > N:
            raise TruncationTooShort(
                f"level {n} needs indices beyond N={N}", level=n, N=N,
            )
        i.append(count)
    i = np.asarray(i)
    masses = np.array([hat2[i[n - 1]:i[n]].sum() for n in range(1, levels + 1)])
    merged = [n for n in range(1, levels + 1) if i[n] == i[n - 1]]
    if merged:
        logger.info("empty groups merged into their successors: %s", merged)
    return Grouping(levels=levels, scale=scale, tail_exponent=q, tail_mass=tail_hat, i=i, masses=masses, merged=merged)


def _guard(a: np.ndarray, c_M: float, at: int, against: int, stop: int) -> Optional[int]:
    """Smallest s with 3 c_M a_at + a_at + ... + a_{at+s-1} >= c_M a_against, None past `stop`."""
    need = c_M * a[against] - GUARD_FACTOR * c_M * a[at]
    if need <= 0:
        return 0
    run = np.cumsum(a[at:stop])
    s = int(np.searchsorted(run, need)) + 1
    return s if s <= run.size else None


def segment_plan(
    a: np.ndarray,
    c_M: float,
    i: Sequence[int],
    n: int,
    previous_start: Optional[int] = None,
) -> SegmentPlan:
    """Greedy pipes of group n: each window is the shortest run summing to at least l_n/2, and
    each guard the shortest run keeping the next pipe clear of the current one.

    Interior windows must also stay at or below 2 l_n (WindowOverflow otherwise); the last window
    takes whatever the group has left.
    """
    a = np.asarray(a, dtype=float)
    lo, hi = int(i[n - 1]) + 1, int(i[n])
    if hi < lo:
        raise GroupExhausted(f"group {n} is empty", group=n)
    level = 2.0 ** -n

    entry = 0
    if previous_start is not None:
        entry = _guard(a, c_M, lo, previous_start, hi + 1)
        if entry is None or lo + entry > hi:
            raise GroupExhausted(f"group {n} is used up by its entry guard", group=n)

    m = [lo]
    guards: List[int] = []
    windows = []
    cursor = lo + entry
    final_short = False
    while True:
        run = np.cumsum(a[cursor:hi + 1])
        e = cursor + int(np.searchsorted(run, 0.5 * level)) + 1
        if e > hi - 1:
            windows.append((cursor, hi + 1))
            final_short = run[-1] < 0.5 * level
            break
        s = _guard(a, c_M, e, cursor, hi + 1)
        if s is None or e + s > hi:
            windows.append((cursor, hi + 1))
            break
        total = float(run[e - cursor - 1])
        if total > 2.0 * level:
            raise WindowOverflow(
                f"group {n}: window starting at {cursor} sums to {total:.6g} > 2 l_n = {2.0 * level:.6g}",
                group=n, start=cursor, total=total,
            )
        windows.append((cursor, e))
        guards.append(s)
        m.append(e)
        cursor = e + s
    m.append(hi)

    sums = np.array([compensated_sum(a[s:t]) for s, t in windows])
    return SegmentPlan(
        n=n,
        level_length=level,
        entry_guard=entry,
        m=m,
        guards=guards,
        windows=windows,
        window_sums=sums,
        final_short=final_short,
    )


def build_counterexample_plan(spec: PhiSpec, groups: int, N: int = DEFAULT_TRUNCATION) -> CounterexamplePlan:
    """Sequences, grouping, pipes and the folded layout of the first `groups` levels."""
    if groups < 1:
        raise ValueError("at least one group is needed")
    seq = base_sequences(spec, N)
    grouping = grouping_indices(seq.a, groups, N)
    a = seq.a * grouping.scale
    c_M = seq.c_M

    plans: List[SegmentPlan] = []
    previous = None
    for n in range(1, groups + 1):
        if n in grouping.merged:
            continue
        plan = segment_plan(a, c_M, grouping.i, n, previous)
        plans.append(plan)
        previous = plan.last_start
    layout = fold_layout(a, c_M, grouping.i_at(1), plans)
    return CounterexamplePlan(
        spec=spec,
        N=N,
        sequences=seq,
        scale=grouping.scale,
        a=a,
        b=np.concatenate([[0.0], compensated_cumsum(a)]),
        c_M=c_M,
        l=2.0 ** -np.arange(1, groups + 1, dtype=float),
        grouping=grouping,
        segments=plans,
        layout=layout,
    )


def laplace_phi(spec: PhiSpec, K: np.ndarray, nodes: int = 32) -> np.ndarray:
    """J(K) = integral over u > 0 of phi(K + u) e^-u."""
    u, w = laguerre_rule(nodes)
    K = np.atleast_1d(np.asarray(K, dtype=float))
    return phi_eval(spec, K[:, None] + u[None, :]) @ w


def chain_offsets(a: np.ndarray, c_M: float, count: int) -> np.ndarray:
    """K_n = sum_{k<=n} a_k / (c_M a_{k+1}), the quasi-hyperbolic cost of the axis up to R_n."""
    steps = a[1:count + 1] / (c_M * a[2:count + 2])
    return compensated_cumsum(steps)


def cap_phi_integral(spec: PhiSpec, radius: float, nodes: int = 32) -> float:
    """Half-disk cap with phi(log(rho / (rho - |z|))) in closed form up to a Laguerre integral."""
    u, w = laguerre_rule(nodes)
    return float(np.pi * radius ** 2 * np.dot(w, phi_eval(spec, u) * -np.expm1(-u)))


def _spot_checks(plan: CounterexamplePlan, pitch: float, count: int, seed: int) -> List[SpotCheck]:
    a, c_M = plan.a, plan.c_M
    K = count + 1
    domain = unfolded_chain(a, c_M, K)
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(np.arange(1, K), size=count, replace=False))
    points = plan.b[chosen] + 0.5 * a[chosen] + 0j
    table = quasi_hyperbolic_table(domain, np.concatenate([[0j], points]), pitch)
    offsets = np.concatenate([[0.0], chain_offsets(a, c_M, K)])
    checks = []
    for idx, n in enumerate(chosen):
        chain = offsets[n - 1] + 0.5 * a[n] / (c_M * a[n + 1])
        checks.append(SpotCheck(n=int(n), point=points[idx], grid_k=float(table[0, idx + 1]), chain_k=float(chain)))
    return checks


def verify_counterexample(
    plan: CounterexamplePlan,
    pitch: Optional[float] = None,
    spot_checks: int = 0,
    seed: Optional[int] = None,
    increment_tol: float = INCREMENT_TOLERANCE,
) -> VerificationReport:
    """Audit both halves: finite phi(k)-integral bound against growing internal diameter."""
    spec = plan.spec
    seq = plan.sequences
    N = seq.N

    x = 1.0 / phi_eval(spec, np.arange(1, N + 1, dtype=float))
    square_sum = classify_weighted_series(series_probe(x, -1.0 / 3.0))
    increment = float(x[-1] * seq.S[-1] ** (-4.0 / 3.0))

    oracle = TubeDistanceOracle(plan.layout)
    ends = np.concatenate([[plan.layout.lead_end], plan.layout.group_ends])
    centers = plan.layout.centers[ends]
    diameters = oracle.lower(centers)
    upper = oracle.upper(centers)
    i = plan.grouping.i
    tube = [compensated_sum(plan.a[1:i[0] + 1])]
    tube += [compensated_sum(plan.a[i[n - 1] + 1:i[n] + 1]) for n in plan.layout.groups]

    count = min(int(i[-1]), N - 1)
    a = plan.a
    areas = plan.c_M * a[1:count + 1] * (a[1:count + 1] + a[2:count + 2])
    offsets = chain_offsets(a, plan.c_M, count)
    integrals = areas * laplace_phi(spec, offsets)
    cap = cap_phi_integral(spec, plan.layout.cap_radius)
    partials = cap + compensated_cumsum(integrals)

    squares = a[1:count + 1] ** 2
    phi_n = phi_eval(spec, np.arange(1, count + 1, dtype=float))
    bound = cap + 2.0 * plan.c_M * seq.M * (
        compensated_sum(squares * phi_n) + radial_phi_integral(spec) * compensated_sum(squares)
    )

    checks: List[SpotCheck] = []
    if spot_checks:
        seed = settings.seed if seed is None else seed
        checks = _spot_checks(plan, pitch or settings.default_pitch, spot_checks, seed)

    report = VerificationReport(
        square_sum=square_sum,
        square_partial=square_sum.partial,
        square_increment=increment,
        square_converged=increment < increment_tol,
        diameters=diameters,
        diameter_upper=upper,
        tube_lengths=tube,
        trapezoid_integrals=integrals,
        integral_partials=partials,
        cap_term=cap,
        integral_bound=bound,
        spot_checks=checks,
    )
    logger.info(
        "verification: square sum %.6g (last increment %.3g), diameter %.4g, integral %.6g <= %.6g",
        report.square_partial, increment, diameters[-1], partials[-1], bound,
    )
    return report
