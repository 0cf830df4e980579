# conformext/utils/svg.py

from typing import Iterable, List
from xml.sax.saxutils import escape

import numpy as np

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.6f}" height="{height:.6f}" \
viewBox="0 0 {width:.6f} {height:.6f}">
<rect x="0" y="0" width="{width:.6f}" height="{height:.6f}" style="fill:#ffffff"/>
<g transform="translate({tx:.6f},{ty:.6f}) scale({scale:.6f},{neg_scale:.6f})">
"""

POSTAMBLE = "</g>\n{labels}</svg>\n"


def _pairs(points) -> List[complex]:
    return [complex(z) for z in np.asarray(points, dtype=complex).ravel()]


class SvgCanvas:
    """World coordinates with y pointing up; the bounding box grows with every element."""

    def __init__(self, size: float = 600.0, pad: float = 0.05):
        self.size = size
        self.pad = pad
        self.min_x = self.max_x = self.min_y = self.max_y = None
        self.commands: List[str] = []
        self.labels: List[tuple] = []

    def require(self, x: float, y: float) -> None:
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def _points(self, points) -> str:
        out = []
        for z in _pairs(points):
            self.require(z.real, z.imag)
            out.append(f"{z.real:.6f},{z.imag:.6f}")
        return " ".join(out)

    def polyline(self, points, color: str = "#000000", width: float = 1.0) -> None:
        self.commands.append(
            f'<polyline points="{self._points(points)}" style="fill:none;stroke:{color};'
            f'stroke-width:{width:.6f}" vector-effect="non-scaling-stroke"/>'
        )

    def polylines(self, lines: Iterable, color: str = "#000000", width: float = 1.0) -> None:
        for line in lines:
            self.polyline(line, color, width)

    def polygon(self, points, color: str = "#000000", fill: str = "none", width: float = 1.0) -> None:
        self.commands.append(
            f'<polygon points="{self._points(points)}" style="fill:{fill};stroke:{color};'
            f'stroke-width:{width:.6f}" vector-effect="non-scaling-stroke"/>'
        )

    def circle(self, center: complex, radius: float, color: str = "#000000", fill: str = "none") -> None:
        center = complex(center)
        self.require(center.real - radius, center.imag - radius)
        self.require(center.real + radius, center.imag + radius)
        self.commands.append(
            f'<circle cx="{center.real:.6f}" cy="{center.imag:.6f}" r="{radius:.6f}" '
            f'style="fill:{fill};stroke:{color}" vector-effect="non-scaling-stroke"/>'
        )

    def text(self, at: complex, text: str, color: str = "#444444") -> None:
        """Labels are placed in page space so that they stay upright."""
        at = complex(at)
        self.require(at.real, at.imag)
        self.labels.append((at, text, color))

    def render(self) -> str:
        if self.min_x is None:
            self.require(0.0, 0.0)
        span = max(self.max_x - self.min_x, self.max_y - self.min_y, 1e-12)
        margin = self.pad * span
        scale = self.size / (span + 2.0 * margin)
        width = (self.max_x - self.min_x + 2.0 * margin) * scale
        height = (self.max_y - self.min_y + 2.0 * margin) * scale
        tx = (margin - self.min_x) * scale
        ty = (self.max_y + margin) * scale
        labels = "".join(
            f'<text x="{tx + at.real * scale:.6f}" y="{ty - at.imag * scale:.6f}" fill="{color}" '
            f'font-size="12" font-family="monospace">{escape(text)}</text>\n'
            for at, text, color in self.labels
        )
        head = PREAMBLE.format(width=width, height=height, tx=tx, ty=ty, scale=scale, neg_scale=-scale)
        return head + "".join(c + "\n" for c in self.commands) + POSTAMBLE.format(labels=labels)

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.render())
