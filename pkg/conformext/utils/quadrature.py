# conformext/utils/quadrature.py

from functools import lru_cache
from typing import Callable, List, Tuple

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from ..exceptions import QuadratureBudgetExceeded


@lru_cache(maxsize=32)
def legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]"""
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def _jacobi_rule_cached(n: int, alpha: float, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def jacobi_rule(n: int, alpha: float, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1]"""
    return _jacobi_rule_cached(n, round(float(alpha), 14), round(float(beta), 14))


@lru_cache(maxsize=16)
def laguerre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Laguerre rule for the weight e^{-x} on [0, inf)"""
    x, w = laggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int = 16) -> float:
    x, w = legendre_rule(n)
    half = 0.5 * (b - a)
    return float(half * np.dot(w, f(a + half * (x + 1.0))))


def adaptive_gauss(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    n: int = 16,
    max_depth: int = 40,
) -> Tuple[float, float]:
    """Bisection-adaptive Gauss-Legendre; returns (value, error estimate).

    A panel is accepted when its n-point and 2n-point values agree to tol (relative to the
    running magnitude, absolute floor tol * 1e-3).
    """
    total = 0.0
    err = 0.0
    stack: List[Tuple[float, float, int]] = [(a, b, 0)]
    budget = tol * max(abs(gauss_panel(f, a, b, 2 * n)), 1e-3)
    while stack:
        lo, hi, depth = stack.pop()
        coarse = gauss_panel(f, lo, hi, n)
        fine = gauss_panel(f, lo, hi, 2 * n)
        delta = abs(fine - coarse)
        if delta <= budget * (hi - lo) / (b - a):
            total += fine
            err += delta
            continue
        if depth >= max_depth or not np.isfinite(delta):
            raise QuadratureBudgetExceeded(
                f"no convergence on [{lo:.6g}, {hi:.6g}] after {depth} bisections",
                interval=[lo, hi],
                error=delta,
            )
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    return total, err


def windowed_integral(
    f: Callable[[np.ndarray], np.ndarray],
    start: float,
    first_width: float,
    tol: float = 1e-10,
    n: int = 16,
    max_windows: int = 64,
) -> Tuple[float, List[float]]:
    """Integral of f over [start, inf) on doubling windows.

    Stops once a window adds less than tol of the running total; raises
    QuadratureBudgetExceeded when max_windows windows do not get there.
    """
    contributions: List[float] = []
    total = 0.0
    lo, width = start, first_width
    for _ in range(max_windows):
        hi = lo + width
        value, _ = adaptive_gauss(f, lo, hi, tol=tol, n=n)
        contributions.append(value)
        total += value
        if abs(value) <= tol * abs(total) and len(contributions) > 2:
            return total, contributions
        lo, width = hi, 2.0 * width
    raise QuadratureBudgetExceeded(
        f"integral over [{start:g}, inf) still growing after {max_windows} windows",
        windows=max_windows,
        partial=total,
    )
