# conformext/services/phi.py

import logging
from typing import Optional, Sequence

import numpy as np

from ..config import settings
from ..exceptions import Inconclusive, NegativeArgument, NotIncreasing
from ..models.phi import PhiFamily, PhiSpec, PhiTail, SubadditivityEstimate, TailKind, TailVerdict
from ..utils.quadrature import legendre_rule

logger = logging.getLogger(__name__)

RATIO_CERTIFICATE = 0.95
TRAILING_WINDOWS = 5
M_HEADROOM = 1.05


def phi_alpha(alpha: float) -> PhiSpec:
    return PhiSpec(family=PhiFamily.ALPHA_LOG, alpha=alpha)


def phi_table(knots: Sequence[Sequence[float]], tail_kind: Optional[str] = None, exponent: float = 1.0) -> PhiSpec:
    tail = PhiTail(kind=TailKind(tail_kind), exponent=exponent) if tail_kind else None
    return PhiSpec(family=PhiFamily.TABLE, knots=knots, tail=tail)


def _alpha_log_value(t, alpha: float):
    return t * np.log(np.e + t) ** alpha


def _table_value(spec: PhiSpec, t: np.ndarray) -> np.ndarray:
    kt, kv = spec.knots[:, 0], spec.knots[:, 1]
    t_last, v_last = spec.last_knot
    out = np.interp(t, kt, kv)
    beyond = t > t_last
    if not beyond.any():
        return out
    tb = t[beyond]
    tail = spec.tail
    if tail is None:
        slope = (kv[-1] - kv[-2]) / (kt[-1] - kt[-2])
        out[beyond] = v_last + slope * (tb - t_last)
    elif tail.kind == TailKind.POWER:
        out[beyond] = v_last * (tb / t_last) ** tail.exponent
    elif tail.kind == TailKind.EXPONENTIAL:
        with np.errstate(over="ignore"):
            out[beyond] = v_last * np.exp(tail.exponent * (tb - t_last))
    else:
        out[beyond] = v_last * _alpha_log_value(tb, tail.exponent) / _alpha_log_value(t_last, tail.exponent)
    return out


def phi_eval(spec: PhiSpec, t):
    """phi(t) for scalar or array t >= 0."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise NegativeArgument("phi is defined for t >= 0 only", value=float(arr.min()))
    flat = np.atleast_1d(arr).astype(float)
    if spec.family == PhiFamily.ALPHA_LOG:
        values = _alpha_log_value(flat, spec.alpha)
    else:
        values = _table_value(spec, flat)
    return float(values[0]) if arr.ndim == 0 else values.reshape(arr.shape)


def log_phi(spec: PhiSpec, log_t: np.ndarray) -> np.ndarray:
    """log phi(t) from log t, finite for t far beyond float range."""
    log_t = np.atleast_1d(np.asarray(log_t, dtype=float))
    if spec.family == PhiFamily.ALPHA_LOG:
        return log_t + spec.alpha * np.log(np.logaddexp(1.0, log_t))
    t_last, v_last = spec.last_knot
    with np.errstate(over="ignore"):
        t = np.exp(log_t)
    out = np.empty_like(log_t)
    head = log_t <= np.log(t_last)
    out[head] = np.log(np.interp(t[head], spec.knots[:, 0], spec.knots[:, 1]))
    lt = log_t[~head]
    tail = spec.tail
    if tail is None:
        kt, kv = spec.knots[:, 0], spec.knots[:, 1]
        slope = (kv[-1] - kv[-2]) / (kt[-1] - kt[-2])
        with np.errstate(over="ignore"):
            out[~head] = np.log(v_last + slope * (np.exp(lt) - t_last))
    elif tail.kind == TailKind.POWER:
        out[~head] = np.log(v_last) + tail.exponent * (lt - np.log(t_last))
    elif tail.kind == TailKind.EXPONENTIAL:
        with np.errstate(over="ignore"):
            out[~head] = np.log(v_last) + tail.exponent * (np.exp(lt) - t_last)
    else:
        a = tail.exponent
        out[~head] = (
            np.log(v_last) + lt + a * np.log(np.logaddexp(1.0, lt)) - np.log(_alpha_log_value(t_last, a))
        )
    return out


def _require_increasing(values: np.ndarray, grid: np.ndarray) -> None:
    steps = np.diff(values)
    if np.any(steps <= 0):
        i = int(np.argmax(steps <= 0))
        raise NotIncreasing(
            f"phi fails to increase between t={grid[i]:.6g} and t={grid[i + 1]:.6g}",
            t1=float(grid[i]), t2=float(grid[i + 1]),
        )


def subadditivity_grid(t_max: float = 1e6, points: int = 128) -> np.ndarray:
    return np.concatenate([[0.0], np.logspace(-6.0, np.log10(t_max), points)])


def estimate_subadditivity_M(spec: PhiSpec, grid: Optional[np.ndarray] = None) -> SubadditivityEstimate:
    """max phi(s+t) / (phi(s)+phi(t)) over grid pairs; the returned spec stores M = 1.05 M_hat."""
    grid = subadditivity_grid() if grid is None else np.sort(np.asarray(grid, dtype=float))
    values = phi_eval(spec, grid)
    _require_increasing(values, grid)
    s, t = np.meshgrid(grid, grid, indexing="ij")
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        ratio = phi_eval(spec, s + t) / (values[:, None] + values[None, :])
    ratio[~np.isfinite(ratio)] = np.nan
    ratio[(s == 0) & (t == 0)] = np.nan
    i, j = np.unravel_index(np.nanargmax(ratio), ratio.shape)
    m_hat = float(ratio[i, j])
    logger.debug("subadditivity for %s: M_hat=%.6f at (%.3g, %.3g)", spec.label, m_hat, grid[i], grid[j])
    return SubadditivityEstimate(
        M_hat=m_hat,
        argmax=(float(grid[i]), float(grid[j])),
        pairs=int(np.isfinite(ratio).sum()),
        spec=spec.copy(update={"M": M_HEADROOM * m_hat}),
    )


def check_subadditivity(spec: PhiSpec, pairs: int = 10_000, seed: Optional[int] = None) -> float:
    """Largest phi(s+t) / (M (phi(s)+phi(t))) on a fresh log-uniform random grid (<= 1 certifies M)."""
    if spec.M is None:
        raise ValueError("spec carries no subadditivity constant")
    rng = np.random.default_rng(settings.seed + 1 if seed is None else seed)
    s = 10.0 ** rng.uniform(-6.0, 6.0, pairs)
    t = 10.0 ** rng.uniform(-6.0, 6.0, pairs)
    return float(np.max(phi_eval(spec, s + t) / (spec.M * (phi_eval(spec, s) + phi_eval(spec, t)))))


def quasilinearity_constant(spec: PhiSpec, a: float, grid: Optional[np.ndarray] = None) -> float:
    """max over x > 0 of phi(a x) / phi(x)"""
    if a <= 0:
        raise ValueError("scale must be positive")
    grid = np.logspace(-6.0, 6.0, 2001) if grid is None else np.sort(np.asarray(grid, dtype=float))
    values = phi_eval(spec, grid)
    _require_increasing(values, grid)
    if a == 1.0:
        return 1.0
    return float(np.max(phi_eval(spec, a * grid) / values))


def _window_integral(spec: PhiSpec, lo: float, hi: float, nodes: int) -> float:
    """Integral of 1/phi over t in [e^lo - e, e^hi - e], written in u = log(e + t)."""
    x, w = legendre_rule(nodes)
    half = 0.5 * (hi - lo)
    u = lo + half * (x + 1.0)
    log_t = u + np.log1p(-np.exp(1.0 - u))
    with np.errstate(over="ignore"):
        integrand = np.exp(u - log_phi(spec, log_t))
    return float(half * np.dot(w, integrand))


def classify_tail_integral(
    spec: PhiSpec,
    t0: float = 1.0,
    tol: float = 1e-6,
    budget: Optional[int] = None,
    threshold: Optional[float] = None,
    nodes: int = 32,
) -> TailVerdict:
    """Convergent / Divergent verdict for the integral of 1/phi over [t0, inf).

    Windows double in u = log(e + t). Convergent needs five trailing window ratios below 0.95
    with the last window under tol of the total; Divergent needs the partial past the threshold
    with five trailing ratios at or above 0.95. Otherwise Inconclusive after `budget` windows.
    """
    if t0 <= 0:
        raise NegativeArgument("tail integral needs t0 > 0", t0=t0)
    budget = settings.tail_window_budget if budget is None else budget
    threshold = settings.divergence_threshold if threshold is None else threshold
    if spec.family == PhiFamily.TABLE and spec.tail is None:
        raise Inconclusive("table gauge declares no tail; cannot extrapolate", budget=0)
    u0 = float(np.log(np.e + t0))
    contributions = []
    ratios = []
    partial = 0.0
    for k in range(budget):
        c = _window_integral(spec, u0 * 2.0 ** k, u0 * 2.0 ** (k + 1), nodes)
        if contributions:
            prev = contributions[-1]
            ratios.append(c / prev if prev > 0 else (np.inf if c > 0 else 0.0))
        contributions.append(c)
        partial += c
        trailing = ratios[-TRAILING_WINDOWS:]
        if not np.isfinite(partial) or (
            len(trailing) == TRAILING_WINDOWS and partial >= threshold
            and all(r >= RATIO_CERTIFICATE for r in trailing)
        ):
            logger.debug("tail of %s divergent after %d windows (partial %.4g)", spec.label, k + 1, partial)
            return TailVerdict(kind="divergent", t0=t0, windows=k + 1, partial=partial, ratios=ratios)
        if (
            len(trailing) == TRAILING_WINDOWS and all(r < RATIO_CERTIFICATE for r in trailing)
            and c < tol * partial
        ):
            r = trailing[-1]
            value = partial + c * r / (1.0 - r)
            logger.debug("tail of %s convergent after %d windows: %.10g", spec.label, k + 1, value)
            return TailVerdict(kind="convergent", t0=t0, windows=k + 1, partial=partial, value=value, ratios=ratios)
    raise Inconclusive(
        f"no certificate for {spec.label} within {budget} windows", budget=budget, partial=partial,
    )
