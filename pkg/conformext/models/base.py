# conformext/models/base.py

from typing import Any

import numpy as np
from pydantic import BaseModel


def _encode_array(value: np.ndarray) -> Any:
    if np.iscomplexobj(value):
        return np.stack([value.real, value.imag], axis=-1).tolist()
    return value.tolist()


def _encode_complex(value: complex) -> Any:
    return [float(value.real), float(value.imag)]


class FloatArray(np.ndarray):
    """Read-only float array field; parses nested lists."""

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, value: Any) -> np.ndarray:
        arr = np.array(value, dtype=float)
        arr.setflags(write=False)
        return arr


class ComplexArray(np.ndarray):
    """Read-only complex array field; accepts complex arrays or [re, im] pairs."""

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, value: Any) -> np.ndarray:
        arr = np.asarray(value)
        if not np.iscomplexobj(arr):
            arr = np.asarray(arr, dtype=float)
            if arr.ndim >= 2 and arr.shape[-1] == 2:
                arr = arr[..., 0] + 1j * arr[..., 1]
        arr = np.array(arr, dtype=complex)
        arr.setflags(write=False)
        return arr


class ComplexValue(complex):
    """Complex scalar field; accepts numbers or [re, im]."""

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, value: Any) -> complex:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError("complex value must be [re, im]")
            return complex(float(value[0]), float(value[1]))
        return complex(value)


class RecordModel(BaseModel):
    """Immutable base for every carrier and report in the package"""

    class Config:
        allow_mutation = False
        arbitrary_types_allowed = True
        json_encoders = {
            np.ndarray: _encode_array,
            complex: _encode_complex,
            np.integer: int,
            np.floating: float,
            np.bool_: bool,
        }

    def dump(self) -> str:
        """Deterministic JSON text"""
        return self.json(sort_keys=True, indent=2)


class IntArray(np.ndarray):
    """Read-only integer array field."""

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, value: Any) -> np.ndarray:
        arr = np.array(value, dtype=np.int64)
        arr.setflags(write=False)
        return arr
