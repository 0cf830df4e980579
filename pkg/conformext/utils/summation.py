# conformext/utils/summation.py

import math
from typing import Iterable

import numpy as np

_BLOCK = 1 << 14


class KahanSummation:
    """Running compensated sum.

    Keeps the low-order bits lost by each += in `carry` and feeds them back into the next add.
    """

    def __init__(self, start: float = 0.0):
        self.sum = float(start)
        self.carry = 0.0

    def add(self, value: float) -> float:
        value = float(value) - self.carry
        previous = self.sum
        self.sum = previous + value
        self.carry = (self.sum - previous) - value
        return self.sum

    def extend(self, values: Iterable[float]) -> float:
        for v in values:
            self.add(v)
        return self.sum


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Prefix sums with block-wise extended precision and a compensated carry between blocks."""
    values = np.asarray(values, dtype=float)
    out = np.empty_like(values)
    running = KahanSummation()
    for start in range(0, values.size, _BLOCK):
        block = values[start:start + _BLOCK]
        local = np.cumsum(block.astype(np.longdouble))
        out[start:start + _BLOCK] = (local + np.longdouble(running.sum)).astype(float)
        running.add(math.fsum(block))
    return out


def compensated_sum(values: Iterable[float]) -> float:
    return math.fsum(values)
