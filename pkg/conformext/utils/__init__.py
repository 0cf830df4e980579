# conformext/utils/__init__.py

from .points import as_complex, as_xy
from .quadrature import gauss_panel, jacobi_rule, laguerre_rule, legendre_rule
from .summation import KahanSummation, compensated_cumsum, compensated_sum
from .svg import SvgCanvas

__all__ = [
    "as_complex", "as_xy",
    "gauss_panel", "jacobi_rule", "laguerre_rule", "legendre_rule",
    "KahanSummation", "compensated_cumsum", "compensated_sum",
    "SvgCanvas",
]
