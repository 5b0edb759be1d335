"""Grid ball coverings, classification against a zero set, and occupancy.

The covering puts ball centers on a lattice of step r/d over a compact
box, which guarantees every point of the box lies strictly within r of a
center (worst case r/sqrt(d)). Classification follows the three-way split
by center distance: outside (>= eps), neighboring ([r, eps)), inside
(< r, i.e. the open ball meets the zero set). Occupancy counting uses the
lattice itself as a spatial hash, so it is O(n + number of balls).
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import InfeasibleError
from .geometry import AxisBox, Ball, Box, Segment, SinglePoint, ZeroSet
from .sampling import SampleBatch

__all__ = [
    "BallClass",
    "CLASS_NAMES",
    "GridCovering",
    "ClassifiedCovering",
    "OccupancyReport",
    "BoxCountResult",
    "build_grid_covering",
    "classify_ball",
    "classify_covering",
    "count_occupancy",
    "box_counting_dimension",
]


class BallClass(IntEnum):
    EPS_OUTSIDE = 0
    EPS_NEIGHBORING = 1
    EPS_INSIDE = 2


CLASS_NAMES = {
    BallClass.EPS_OUTSIDE: "eps_outside",
    BallClass.EPS_NEIGHBORING: "eps_neighboring",
    BallClass.EPS_INSIDE: "eps_inside",
}


@dataclass(frozen=True, eq=False)
class GridCovering:
    """Equal-radius balls centered on a step r/d lattice over a box."""

    region: Box
    radius: float
    grid_step: float
    centers: np.ndarray  # (m, d)
    shape: tuple[int, ...]

    @property
    def n_balls(self) -> int:
        return len(self.centers)

    @property
    def dim(self) -> int:
        return self.region.dim

    def ball(self, i: int) -> Ball:
        return Ball(self.centers[i], self.radius)

    def balls(self):
        for c in self.centers:
            yield Ball(c, self.radius)


def build_grid_covering(region: Box, r: float) -> GridCovering:
    """Lattice covering with step r/d; the region corner is a lattice origin."""
    if not r > 0:
        raise ValueError("radius must be positive")
    if r > float(np.min(region.sides)) / 2.0:
        raise InfeasibleError(
            f"radius {r} exceeds half the shortest region side {np.min(region.sides) / 2.0}"
        )
    d = region.dim
    step = r / d
    counts = [int(math.floor(side / step + 1e-9)) + 1 for side in region.sides]
    axes = [region.lower[i] + step * np.arange(counts[i]) for i in range(d)]
    grids = np.meshgrid(*axes, indexing="ij")
    centers = np.stack([g.ravel() for g in grids], axis=1)
    return GridCovering(region=region, radius=r, grid_step=step, centers=centers, shape=tuple(counts))


def _center_distances(covering: GridCovering, zero_set: ZeroSet | None) -> np.ndarray:
    if zero_set is None:
        return np.full(covering.n_balls, np.inf)
    return np.asarray(zero_set.distance(covering.centers))


def _check_separation(radius: float, eps: float) -> None:
    if eps < 2.0 * radius:
        raise InfeasibleError(
            f"eps={eps} < 2r={2 * radius}: r <= eps/2 is required so that every "
            "eps-inside ball stays within the eps-neighborhood"
        )


def classify_ball(ball: Ball, zero_set: ZeroSet | None, eps: float) -> BallClass:
    """Three-way classification of one ball by its center distance."""
    _check_separation(ball.radius, eps)
    d = math.inf if zero_set is None else float(zero_set.distance(ball.center))
    if d >= eps:
        return BallClass.EPS_OUTSIDE
    if d < ball.radius:
        return BallClass.EPS_INSIDE
    return BallClass.EPS_NEIGHBORING


@dataclass(frozen=True, eq=False)
class ClassifiedCovering:
    covering: GridCovering
    eps: float
    classes: np.ndarray  # (m,) int8

    @property
    def counts(self) -> np.ndarray:
        """Ball counts indexed by BallClass value."""
        return np.bincount(self.classes, minlength=3)

    def to_csv(self, path, per_ball_counts: np.ndarray | None = None) -> None:
        d = self.covering.dim
        counts = per_ball_counts if per_ball_counts is not None else np.zeros(self.covering.n_balls, dtype=int)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"center_{i + 1}" for i in range(d)] + ["radius", "class", "n_points"])
            for center, cls, npts in zip(self.covering.centers, self.classes, counts):
                writer.writerow(
                    [repr(float(v)) for v in center]
                    + [repr(float(self.covering.radius)), CLASS_NAMES[BallClass(cls)], int(npts)]
                )


def classify_covering(covering: GridCovering, zero_set: ZeroSet | None, eps: float) -> ClassifiedCovering:
    _check_separation(covering.radius, eps)
    d = _center_distances(covering, zero_set)
    classes = np.where(
        d >= eps, np.int8(BallClass.EPS_OUTSIDE),
        np.where(d < covering.radius, np.int8(BallClass.EPS_INSIDE), np.int8(BallClass.EPS_NEIGHBORING)),
    ).astype(np.int8)
    return ClassifiedCovering(covering=covering, eps=eps, classes=classes)


@dataclass(frozen=True, eq=False)
class OccupancyReport:
    """Per-ball point counts plus the per-class fill summary for one trial."""

    per_ball_counts: np.ndarray  # (m,) int64
    class_counts: np.ndarray  # (3,)
    class_nonempty: np.ndarray  # (3,)

    @property
    def filled_fractions(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            frac = self.class_nonempty / self.class_counts
        return np.where(self.class_counts > 0, frac, 0.0)

    @property
    def event_no_empty_outside(self) -> bool:
        """Every eps-outside ball holds at least one sample (vacuous when none)."""
        return bool(self.class_nonempty[BallClass.EPS_OUTSIDE] == self.class_counts[BallClass.EPS_OUTSIDE])

    @property
    def event_all_inside_empty(self) -> bool:
        return bool(self.class_nonempty[BallClass.EPS_INSIDE] == 0)


def count_occupancy(classified: ClassifiedCovering, batch) -> OccupancyReport:
    """Strict-containment occupancy via the lattice spatial hash.

    `batch` may be a SampleBatch or a raw (n, d) array. A point can lie in
    several overlapping balls; each gets credited.
    """
    covering = classified.covering
    points = batch.points if isinstance(batch, SampleBatch) else np.atleast_2d(np.asarray(batch, dtype=float))
    if points.size and points.shape[1] != covering.dim:
        raise ValueError(f"points have d={points.shape[1]}, covering has d={covering.dim}")

    per_ball = np.zeros(covering.n_balls, dtype=np.int64)
    if len(points):
        d = covering.dim
        step = covering.grid_step
        rel = (points - covering.region.lower) / step
        base = np.floor(rel).astype(np.int64)
        r2 = covering.radius**2
        shape = np.asarray(covering.shape)
        # centers within r of a point sit at lattice offsets -d..d of its cell
        for offset in itertools.product(range(-d, d + 1), repeat=d):
            idx = base + np.asarray(offset)
            valid = np.all((idx >= 0) & (idx < shape), axis=1)
            if not np.any(valid):
                continue
            centers = covering.region.lower + idx[valid] * step
            diff = points[valid] - centers
            hit = np.einsum("ij,ij->i", diff, diff) < r2
            if np.any(hit):
                flat = np.ravel_multi_index(idx[valid][hit].T, covering.shape)
                np.add.at(per_ball, flat, 1)

    nonempty = per_ball > 0
    class_counts = np.bincount(classified.classes, minlength=3)
    class_nonempty = np.bincount(classified.classes[nonempty], minlength=3)
    return OccupancyReport(
        per_ball_counts=per_ball,
        class_counts=class_counts,
        class_nonempty=class_nonempty,
    )


@dataclass(frozen=True)
class BoxCountResult:
    upper_estimate: float
    lower_estimate: float
    counts: tuple[int, ...]


def _covering_number(primitive, delta: float) -> int:
    """Closed-form minimal-ish covering count for one primitive.

    Point: 1. Segment of length L: ceil(L / 2 delta). Solid axis box: cover
    by cubes of side 2 delta / sqrt(k) inscribed in balls, k the number of
    positive sides; this upper count is what the estimate uses, while
    volume packing gives the lower bound vol(box)/V_d(delta).
    """
    if isinstance(primitive, SinglePoint):
        return 1
    if isinstance(primitive, Segment):
        return max(1, math.ceil(primitive.length / (2.0 * delta) - 1e-12))
    if isinstance(primitive, AxisBox):
        k = primitive.intrinsic_dimension
        if k == 0:
            return 1
        side_cap = 2.0 * delta / math.sqrt(k)
        count = 1
        for s in primitive.sides:
            if s > 0:
                count *= max(1, math.ceil(s / side_cap - 1e-12))
        return count
    raise TypeError(f"unsupported primitive {type(primitive)!r}")


def box_counting_dimension(zero_set: ZeroSet, deltas) -> BoxCountResult:
    """Box-counting dimension estimates from exact per-primitive cover counts.

    Counts for a union are summed over components (an upper bound on the
    minimal covering). Estimates are the extreme slopes of log N vs
    log(1/delta) over consecutive radii.
    """
    deltas = [float(x) for x in deltas]
    if len(deltas) < 4:
        raise ValueError("need at least 4 radii")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("radii must be strictly decreasing")
    if deltas[0] / deltas[-1] < 8.0 - 1e-12:
        raise ValueError("radii should span at least a factor of 8")
    counts = tuple(sum(_covering_number(c, delta) for c in zero_set.components) for delta in deltas)
    slopes = []
    for (d1, n1), (d2, n2) in zip(zip(deltas, counts), zip(deltas[1:], counts[1:])):
        slopes.append((math.log(n2) - math.log(n1)) / (math.log(1.0 / d2) - math.log(1.0 / d1)))
    return BoxCountResult(upper_estimate=max(slopes), lower_estimate=min(slopes), counts=counts)
