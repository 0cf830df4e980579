# conformext/utils/points.py

from typing import Any, Tuple

import numpy as np


def as_xy(points: Any) -> np.ndarray:
    """Coerce complex numbers, (x, y) pairs or (n, 2) arrays to a float array of shape (n, 2)."""
    arr = np.asarray(points)
    if np.iscomplexobj(arr):
        flat = arr.reshape(-1)
        return np.stack([flat.real, flat.imag], axis=1).astype(float)
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 0:
        return np.array([[float(arr), 0.0]])
    if arr.shape[-1] != 2:
        raise ValueError(f"points must have a trailing dimension of 2, got shape {arr.shape}")
    return arr.reshape(-1, 2)


def as_complex(points: Any) -> np.ndarray:
    """Coerce to a flat complex array."""
    arr = np.asarray(points)
    if np.iscomplexobj(arr):
        return arr.reshape(-1).astype(complex)
    xy = as_xy(arr)
    return xy[:, 0] + 1j * xy[:, 1]


def is_single_point(points: Any) -> bool:
    arr = np.asarray(points)
    if np.iscomplexobj(arr) or arr.ndim == 0:
        return arr.ndim == 0
    return arr.ndim == 1 and arr.shape[0] == 2


def cross2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def bounds(xy: np.ndarray) -> Tuple[float, float, float, float]:
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])
