"""Escape-time pictures of the Mandelbrot set and Julia sets with ray overlays."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from ..angle import Angle
from ..errors import RenderError
from ..numerics.types import Plane, RayTrace

logger = logging.getLogger(__name__)

WHITE = (255, 255, 255)
RED = (255, 0, 0)


class RenderSpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    plane: Literal["mandelbrot", "julia"] = "mandelbrot"
    julia_c: Optional[complex] = None
    center: complex = complex(-0.75, 0)
    width: float = Field(default=3.0, gt=0)
    pixels: Tuple[PositiveInt, PositiveInt] = (800, 600)
    max_iterations: PositiveInt = 500
    escape_radius: float = Field(default=2.0, ge=2)
    overlays: Tuple[Angle, ...] = ()

    @model_validator(mode="after")
    def _julia_needs_parameter(self) -> "RenderSpec":
        if self.plane == "julia" and self.julia_c is None:
            raise ValueError("julia renders need julia_c")
        return self

    @property
    def ray_plane(self) -> Plane:
        return Plane.PARAMETER if self.plane == "mandelbrot" else Plane.DYNAMIC

    @property
    def scale(self) -> float:
        """Width of one pixel in the complex plane."""
        return self.width / self.pixels[0]

    def to_complex(self, column: float, row: float) -> complex:
        w, h = self.pixels
        s = self.scale
        return complex(
            self.center.real + (column + 0.5 - w / 2) * s,
            self.center.imag - (row + 0.5 - h / 2) * s,
        )

    def to_pixel(self, point: complex) -> Tuple[float, float]:
        w, h = self.pixels
        s = self.scale
        return (
            (point.real - self.center.real) / s + w / 2 - 0.5,
            -(point.imag - self.center.imag) / s + h / 2 - 0.5,
        )


@dataclass
class Image:
    """Row-major RGB pixels, shape (height, width, 3)."""

    pixels: np.ndarray

    @classmethod
    def blank(cls, width: int, height: int) -> "Image":
        return cls(np.zeros((height, width, 3), dtype=np.uint8))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def copy(self) -> "Image":
        return Image(self.pixels.copy())

    def to_bytes(self) -> bytes:
        return np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()


def _grid(spec: RenderSpec) -> np.ndarray:
    w, h = spec.pixels
    s = spec.scale
    x = spec.center.real + (np.arange(w) + 0.5 - w / 2) * s
    y = spec.center.imag - (np.arange(h) + 0.5 - h / 2) * s
    return x[np.newaxis, :] + 1j * y[:, np.newaxis]


def escape_counts(spec: RenderSpec) -> np.ndarray:
    """Iteration at which each pixel's orbit leaves the escape radius; 0 if never."""
    grid = _grid(spec)
    if spec.plane == "mandelbrot":
        c = grid.ravel()
        z = np.zeros_like(c)
    else:
        z = grid.ravel().copy()
        c = np.full_like(z, spec.julia_c)

    counts = np.zeros(z.shape, dtype=np.int64)
    alive = np.arange(z.size)
    radius_sq = spec.escape_radius**2
    for i in range(1, spec.max_iterations + 1):
        z[alive] = z[alive] ** 2 + c[alive]
        values = z[alive]
        escaped = values.real**2 + values.imag**2 > radius_sq
        counts[alive[escaped]] = i
        alive = alive[~escaped]
        if alive.size == 0:
            break
    return counts.reshape(grid.shape)


def render(spec: RenderSpec, max_pixels: Optional[int] = None) -> Image:
    """Logarithmic grayscale on the escape iteration; bounded orbits are black."""
    w, h = spec.pixels
    if max_pixels is not None and w * h > max_pixels:
        raise RenderError(f"{w}x{h} = {w * h} pixels exceeds the limit of {max_pixels}")
    counts = escape_counts(spec)
    shade = np.zeros(counts.shape, dtype=np.uint8)
    escaped = counts > 0
    shade[escaped] = np.round(
        255 * np.log1p(counts[escaped]) / math.log1p(spec.max_iterations)
    ).astype(np.uint8)
    logger.debug("rendered %dx%d, %d pixels escaped", w, h, int(escaped.sum()))
    return Image(np.repeat(shade[:, :, np.newaxis], 3, axis=2))


def _clip(
    x0: float, y0: float, x1: float, y1: float, width: int, height: int
) -> Optional[Tuple[float, float, float, float]]:
    """Liang-Barsky clipping of a segment to the pixel rectangle."""
    dx, dy = x1 - x0, y1 - y0
    low, high = 0.0, 1.0
    for p, q in (
        (-dx, x0 + 0.5),
        (dx, width - 0.5 - x0),
        (-dy, y0 + 0.5),
        (dy, height - 0.5 - y0),
    ):
        if p == 0:
            if q < 0:
                return None
            continue
        r = q / p
        if p < 0:
            low = max(low, r)
        else:
            high = min(high, r)
        if low > high:
            return None
    return x0 + low * dx, y0 + low * dy, x0 + high * dx, y0 + high * dy


def _line(x0: int, y0: int, x1: int, y1: int) -> Iterator[Tuple[int, int]]:
    """Bresenham's integer line, both endpoints included."""
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    error = dx + dy
    while True:
        yield x0, y0
        if x0 == x1 and y0 == y1:
            return
        doubled = 2 * error
        if doubled >= dy:
            error += dy
            x0 += sx
        if doubled <= dx:
            error += dx
            y0 += sy


def _stroke(pixels: np.ndarray, points: List[Tuple[float, float]], color) -> None:
    height, width = pixels.shape[:2]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        clipped = _clip(x0, y0, x1, y1, width, height)
        if clipped is None:
            continue
        a, b, c, d = (int(round(v)) for v in clipped)
        for x, y in _line(a, b, c, d):
            if 0 <= x < width and 0 <= y < height:
                pixels[y, x] = color


def _mark(pixels: np.ndarray, x: float, y: float, color) -> None:
    height, width = pixels.shape[:2]
    cx, cy = int(round(x)), int(round(y))
    for row in range(cy - 1, cy + 2):
        for column in range(cx - 1, cx + 2):
            if 0 <= column < width and 0 <= row < height:
                pixels[row, column] = color


def overlay_trace(img: Image, spec: RenderSpec, trace: RayTrace) -> Image:
    """Copy of ``img`` with the ray drawn in white and its landing point in red."""
    if trace.plane is not spec.ray_plane:
        raise RenderError(
            f"cannot draw a {trace.plane.value} ray on a {spec.plane} picture"
        )
    out = img.copy()
    if not trace.points:
        return out
    path = [spec.to_pixel(point) for _, point in trace.points]
    if trace.landing is not None:
        path.append(spec.to_pixel(trace.landing))
    _stroke(out.pixels, path, WHITE)
    if trace.landing is not None:
        _mark(out.pixels, *spec.to_pixel(trace.landing), RED)
    return out
