"""Axis-aligned bounding-box arithmetic shared by fusion, simulation, and metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class BBox:
    """Rectangle given by its top-left corner plus width and height, in pixels.

    Coordinates are real-valued (trackers produce sub-pixel boxes). Width and
    height must be strictly positive: a box only ever describes a present
    target, absence is expressed by having no box at all.
    """

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (
            math.isfinite(self.x)
            and math.isfinite(self.y)
            and math.isfinite(self.w)
            and math.isfinite(self.h)
        ):
            raise ValueError(f"box fields must be finite, got {(self.x, self.y, self.w, self.h)}")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box dimensions must be positive, got w={self.w} h={self.h}")

    @property
    def cx(self) -> float:
        return self.x + self.w / 2.0

    @property
    def cy(self) -> float:
        return self.y + self.h / 2.0

    @property
    def area(self) -> float:
        return self.w * self.h

    def translated(self, dx: float, dy: float) -> "BBox":
        return BBox(self.x + dx, self.y + dy, self.w, self.h)


def iou(a: BBox, b: BBox) -> float:
    """Intersection-over-union of two boxes; 0.0 when they are disjoint."""
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    if ix <= 0.0:
        return 0.0
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if iy <= 0.0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def center_distance(a: BBox, b: BBox) -> float:
    """Euclidean distance between box centers, in pixels."""
    return math.hypot(a.cx - b.cx, a.cy - b.cy)


def aspect_ratio(b: BBox) -> float:
    """Width-to-height ratio of a box."""
    return b.w / b.h
