"""Binary-PPM rasters and the viewport -> pixel mapping shared by renderers."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["Raster", "Viewport"]

_MAX_SIDE = 8192


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned window x0 <= x <= x1, y0 <= y <= y1 in the rho plane."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValidationError("viewport must satisfy x0 < x1 and y0 < y1")

    @staticmethod
    def parse(text):
        parts = text.split(",")
        if len(parts) != 4:
            raise ValidationError("viewport must look like 'x0,x1,y0,y1'")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ValidationError(f"bad viewport {text!r}") from None
        return Viewport(*vals)

    @staticmethod
    def square(r):
        return Viewport(-r, r, -r, r)

    def __str__(self):
        return f"{self.x0!r},{self.x1!r},{self.y0!r},{self.y1!r}"


class Raster:
    """8-bit RGB image, row-major from the top-left, serialised as PPM P6."""

    def __init__(self, width, height, viewport=None):
        if not (1 <= width <= _MAX_SIDE and 1 <= height <= _MAX_SIDE):
            raise ValidationError(f"raster size must be within {_MAX_SIDE}^2")
        self.width = int(width)
        self.height = int(height)
        self.viewport = viewport
        self.pixels = np.zeros((self.height, self.width, 3), dtype=np.uint8)
        self.meta = {"warnings": []}

    def warn(self, message):
        self.meta["warnings"].append(message)

    # -- coordinates --------------------------------------------------------

    def pixel_of(self, z):
        """Pixel (col, row) of a complex point, or None outside the viewport.

        +Im is up: row 0 is the top edge y = y1.  Points exactly on the
        far edges land on the last pixel.
        """
        v = self.viewport
        x, y = z.real, z.imag
        if not (v.x0 <= x <= v.x1 and v.y0 <= y <= v.y1):
            return None
        col = int((x - v.x0) / (v.x1 - v.x0) * self.width)
        row = int((v.y1 - y) / (v.y1 - v.y0) * self.height)
        return min(col, self.width - 1), min(row, self.height - 1)

    # -- drawing ------------------------------------------------------------

    def mark(self, z, color, radius=0):
        px = self.pixel_of(complex(z))
        if px is None:
            return
        col, row = px
        if radius == 0:
            self.pixels[row, col] = color
            return
        for dr in range(-radius, radius + 1):
            for dc in range(-radius, radius + 1):
                if dr * dr + dc * dc <= radius * radius:
                    r, c = row + dr, col + dc
                    if 0 <= r < self.height and 0 <= c < self.width:
                        self.pixels[r, c] = color

    def _pixel_step(self):
        v = self.viewport
        return min((v.x1 - v.x0) / self.width, (v.y1 - v.y0) / self.height)

    def draw_circle(self, center, radius, color):
        step = self._pixel_step() / (2 * max(radius, 1e-9))
        n = max(16, int(2 * math.pi / step) + 1)
        for k in range(n + 1):
            self.mark(center + radius * cmath.exp(2j * math.pi * k / n), color)

    def draw_segment(self, z0, z1, color):
        z0, z1 = complex(z0), complex(z1)
        length = abs(z1 - z0)
        n = max(1, int(length / max(self._pixel_step() / 2, 1e-12)) + 1)
        for k in range(n + 1):
            self.mark(z0 + (z1 - z0) * (k / n), color)

    def draw_polyline(self, points, color):
        pts = [complex(z) for z in points]
        for a, b in zip(pts, pts[1:]):
            self.draw_segment(a, b, color)

    # -- serialisation ------------------------------------------------------

    def to_ppm_bytes(self):
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + self.pixels.tobytes()

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_ppm_bytes())
