# conformext/crud/reports.py

import csv
import logging
import os
from typing import Any, Iterable, List, Sequence

import numpy as np

from ..models.base import RecordModel
from ..utils.svg import SvgCanvas
from .base import BaseRepository

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    """12 significant digits for floats; everything else as text"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def write_table(path: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row of width {len(row)} in a table of {len(columns)} columns")
            writer.writerow([format_cell(v) for v in row])
    return path


def read_table(path: str) -> List[List[str]]:
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class RunRepository:
    """Output folder of one run: report.json, plan.json, tables/*.csv, figures/*.svg"""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.written: List[str] = []

    def _record(self, path: str) -> str:
        self.written.append(path)
        logger.info("wrote %s", path)
        return path

    def save_record(self, obj: RecordModel, id: str) -> str:
        return self._record(BaseRepository(type(obj), self.out_dir).create(obj, id))

    def save_report(self, obj: RecordModel) -> str:
        return self.save_record(obj, "report")

    def save_plan(self, obj: RecordModel) -> str:
        return self.save_record(obj, "plan")

    def save_table(self, name: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        return self._record(write_table(os.path.join(self.out_dir, "tables", f"{name}.csv"), columns, rows))

    def save_figure(self, name: str, canvas: SvgCanvas) -> str:
        folder = os.path.join(self.out_dir, "figures")
        os.makedirs(folder, exist_ok=True)
        path = os.path.join(folder, f"{name}.svg")
        canvas.save(path)
        return self._record(path)
