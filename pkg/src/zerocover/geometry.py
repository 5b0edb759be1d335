"""Exact point-set geometry for zero-density regions.

A zero set is a finite union of primitives (single points, segments,
axis-aligned boxes) with closed-form Euclidean distance queries. Every
ball here is open: membership and intersection use strict ``<`` with no
tolerance band, so classification against a radius is deterministic.
Only the L2 metric is supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Box",
    "Ball",
    "SinglePoint",
    "Segment",
    "AxisBox",
    "ZeroSet",
    "distance_to_zero_set",
    "in_epsilon_neighborhood",
    "ball_intersects_zero_set",
    "zero_set_to_json",
    "zero_set_from_json",
]


def _vector(x, name: str = "point") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"{name} must be a 1-d coordinate vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite coordinates: {v}")
    v.flags.writeable = False
    return v


def _points_matrix(x, dim: int) -> tuple[np.ndarray, bool]:
    """Coerce one point or a batch of points to an (n, dim) matrix.

    Returns the matrix and whether the input was a single point.
    """
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise ValueError(f"dimension mismatch: expected points in R^{dim}, got shape {pts.shape}")
    return pts, single


@dataclass(frozen=True, eq=False)
class Box:
    """Compact axis-aligned box [lower_i, upper_i] with positive side lengths."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", _vector(self.lower, "lower"))
        object.__setattr__(self, "upper", _vector(self.upper, "upper"))
        if self.lower.shape != self.upper.shape:
            raise ValueError("box corners must share a dimension")
        if not np.all(self.upper > self.lower):
            raise ValueError("box sides must be strictly positive")

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def sides(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def volume(self) -> float:
        return float(np.prod(self.sides))

    def contains(self, points) -> np.ndarray | bool:
        pts, single = _points_matrix(points, self.dim)
        ok = np.all((pts >= self.lower) & (pts <= self.upper), axis=1)
        return bool(ok[0]) if single else ok

    def corners(self) -> np.ndarray:
        grids = np.meshgrid(*[(lo, hi) for lo, hi in zip(self.lower, self.upper)], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.lower + rng.random((n, self.dim)) * self.sides


@dataclass(frozen=True, eq=False)
class Ball:
    """Open ball: points y with ||y - center|| < radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vector(self.center, "center"))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.size

    def contains(self, points) -> np.ndarray | bool:
        pts, single = _points_matrix(points, self.dim)
        inside = np.einsum("ij,ij->i", pts - self.center, pts - self.center) < self.radius**2
        return bool(inside[0]) if single else inside


@dataclass(frozen=True, eq=False)
class SinglePoint:
    """Zero-dimensional primitive: one point."""

    point: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _vector(self.point))

    @property
    def dim(self) -> int:
        return self.point.size

    @property
    def intrinsic_dimension(self) -> int:
        return 0

    def _distances(self, pts: np.ndarray) -> np.ndarray:
        return np.linalg.norm(pts - self.point, axis=1)

    def nearest(self, x: np.ndarray) -> np.ndarray:
        return self.point

    def mesh(self, step: float) -> np.ndarray:
        return self.point[None, :]


@dataclass(frozen=True, eq=False)
class Segment:
    """One-dimensional primitive: closed segment between distinct endpoints."""

    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", _vector(self.start, "start"))
        object.__setattr__(self, "end", _vector(self.end, "end"))
        if self.start.shape != self.end.shape:
            raise ValueError("segment endpoints must share a dimension")
        if np.array_equal(self.start, self.end):
            raise ValueError("segment endpoints must be distinct")

    @property
    def dim(self) -> int:
        return self.start.size

    @property
    def intrinsic_dimension(self) -> int:
        return 1

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    def _distances(self, pts: np.ndarray) -> np.ndarray:
        axis = self.end - self.start
        t = (pts - self.start) @ axis / (axis @ axis)
        np.clip(t, 0.0, 1.0, out=t)
        feet = self.start + t[:, None] * axis
        return np.linalg.norm(pts - feet, axis=1)

    def nearest(self, x: np.ndarray) -> np.ndarray:
        axis = self.end - self.start
        t = float(np.clip((x - self.start) @ axis / (axis @ axis), 0.0, 1.0))
        return self.start + t * axis

    def mesh(self, step: float) -> np.ndarray:
        k = max(2, int(math.ceil(self.length / step)) + 1)
        t = np.linspace(0.0, 1.0, k)
        return self.start + t[:, None] * (self.end - self.start)


@dataclass(frozen=True, eq=False)
class AxisBox:
    """Axis-aligned solid box primitive; sides may be degenerate (zero length)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", _vector(self.lower, "lower"))
        object.__setattr__(self, "upper", _vector(self.upper, "upper"))
        if self.lower.shape != self.upper.shape:
            raise ValueError("box corners must share a dimension")
        if not np.all(self.upper >= self.lower):
            raise ValueError("box requires lower <= upper coordinatewise")

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def intrinsic_dimension(self) -> int:
        return int(np.count_nonzero(self.upper > self.lower))

    @property
    def sides(self) -> np.ndarray:
        return self.upper - self.lower

    def _distances(self, pts: np.ndarray) -> np.ndarray:
        clamped = np.clip(pts, self.lower, self.upper)
        return np.linalg.norm(pts - clamped, axis=1)

    def nearest(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def mesh(self, step: float) -> np.ndarray:
        axes = []
        for lo, hi in zip(self.lower, self.upper):
            if hi > lo:
                k = max(2, int(math.ceil((hi - lo) / step)) + 1)
                axes.append(np.linspace(lo, hi, k))
            else:
                axes.append(np.array([lo]))
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)


ZeroSetPrimitive = SinglePoint | Segment | AxisBox


def _component_gap(a: ZeroSetPrimitive, b: ZeroSetPrimitive) -> float:
    # Alternating nearest-point projection between two convex sets converges
    # to a minimum-distance pair.
    x = a.nearest(np.zeros(a.dim)) if isinstance(a, AxisBox) else (
        a.point if isinstance(a, SinglePoint) else 0.5 * (a.start + a.end)
    )
    y = b.nearest(x)
    for _ in range(256):
        x_new = a.nearest(y)
        y_new = b.nearest(x_new)
        if np.linalg.norm(x_new - x) < 1e-15 and np.linalg.norm(y_new - y) < 1e-15:
            x, y = x_new, y_new
            break
        x, y = x_new, y_new
    return float(np.linalg.norm(x - y))


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Disjoint union of primitives; distances are exact minima over components."""

    components: tuple[ZeroSetPrimitive, ...]

    def __init__(self, components):
        comps = tuple(components)
        if not comps:
            raise ValueError("a zero set needs at least one component")
        dims = {c.dim for c in comps}
        if len(dims) != 1:
            raise ValueError(f"components must share an ambient dimension, got {sorted(dims)}")
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                gap = _component_gap(comps[i], comps[j])
                if not gap > 0:
                    raise ValueError(f"components {i} and {j} are not disjoint (gap={gap})")
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    @property
    def dimension(self) -> int:
        """Intrinsic dimension: the maximum over components."""
        return max(c.intrinsic_dimension for c in self.components)

    def distance(self, points) -> np.ndarray | float:
        pts, single = _points_matrix(points, self.dim)
        dist = self.components[0]._distances(pts)
        for comp in self.components[1:]:
            np.minimum(dist, comp._distances(pts), out=dist)
        return float(dist[0]) if single else dist

    def mesh(self, step: float) -> np.ndarray:
        return np.concatenate([c.mesh(step) for c in self.components], axis=0)


def distance_to_zero_set(x, zero_set: ZeroSet) -> np.ndarray | float:
    """Euclidean distance from x (one point or a batch) to the zero set."""
    return zero_set.distance(x)


def in_epsilon_neighborhood(x, zero_set: ZeroSet, eps: float) -> np.ndarray | bool:
    """Strict test: distance(x, S0) < eps."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    d = zero_set.distance(x)
    return d < eps


def ball_intersects_zero_set(ball: Ball, zero_set: ZeroSet) -> bool:
    """Open-ball intersection with the closed zero set: d(center, S0) < radius."""
    return bool(zero_set.distance(ball.center) < ball.radius)


def zero_set_to_json(zero_set: ZeroSet) -> dict:
    comps = []
    for c in zero_set.components:
        if isinstance(c, SinglePoint):
            comps.append({"type": "point", "coords": c.point.tolist()})
        elif isinstance(c, Segment):
            comps.append({"type": "segment", "start": c.start.tolist(), "end": c.end.tolist()})
        elif isinstance(c, AxisBox):
            comps.append({"type": "box", "lower": c.lower.tolist(), "upper": c.upper.tolist()})
        else:  # pragma: no cover
            raise TypeError(f"unknown primitive {type(c)!r}")
    return {"components": comps}


def zero_set_from_json(payload: dict) -> ZeroSet:
    comps: list[ZeroSetPrimitive] = []
    for rec in payload["components"]:
        kind = rec["type"]
        if kind == "point":
            comps.append(SinglePoint(rec["coords"]))
        elif kind == "segment":
            comps.append(Segment(rec["start"], rec["end"]))
        elif kind == "box":
            comps.append(AxisBox(rec["lower"], rec["upper"]))
        else:
            raise ValueError(f"unknown zero-set primitive type {kind!r}")
    return ZeroSet(comps)
