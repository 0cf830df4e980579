# conformext/utils/parsing.py

import json
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ConfigError
from ..models.phi import PhiFamily, PhiSpec, PhiTail


def parse_phi(text: str) -> PhiSpec:
    """`alpha:1.5` or `table:path.json` with {"knots": [[t, phi], ...], "tail": {"kind", "exponent"}}"""
    kind, _, arg = text.partition(":")
    if not arg:
        raise ConfigError(f"phi spec {text!r} needs the form alpha:X or table:PATH")
    if kind == "alpha":
        try:
            alpha = float(arg)
        except ValueError as err:
            raise ConfigError(f"alpha {arg!r} is not a number") from err
        try:
            return PhiSpec(family=PhiFamily.ALPHA_LOG, alpha=alpha)
        except ValueError as err:
            raise ConfigError(f"invalid alpha {alpha:g}: {err}") from err
    if kind == "table":
        try:
            with open(arg) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read phi table {arg!r}: {err}") from err
        tail = doc.get("tail")
        try:
            return PhiSpec(
                family=PhiFamily.TABLE,
                knots=doc["knots"],
                tail=PhiTail(**tail) if tail else None,
            )
        except (KeyError, ValueError) as err:
            raise ConfigError(f"invalid phi table {arg!r}: {err}") from err
    raise ConfigError(f"unknown phi family {kind!r}")


def parse_point(text: str) -> complex:
    """`x,y` -> x + iy"""
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"point {text!r} must be written x,y")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as err:
        raise ConfigError(f"point {text!r} is not numeric") from err


def read_domain_file(path: str) -> Tuple[np.ndarray, Optional[float]]:
    """Vertices and grid hint from JSON: a bare [[x, y], ...] list, or {"vertices": [...]} with an
    optional positive "resolution_hint" (the layout a saved JordanDomain is written in)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read domain {path!r}: {err}") from err
    hint = None
    if isinstance(doc, dict):
        vertices = doc.get("vertices")
        hint = doc.get("resolution_hint")
        if hint is not None and (isinstance(hint, bool) or not isinstance(hint, (int, float)) or hint <= 0):
            raise ConfigError(f"domain file {path!r}: resolution_hint must be a positive number, got {hint!r}")
    else:
        vertices = doc
    if vertices is None:
        raise ConfigError(f"domain file {path!r} has no vertices")
    return np.asarray(vertices, dtype=float), None if hint is None else float(hint)


def read_vertices(path: str) -> np.ndarray:
    return read_domain_file(path)[0]
