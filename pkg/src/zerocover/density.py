"""Catalog of densities with known zero sets and vanishing structure.

Each model knows its support, its zero set S0, the neighborhood radius
eps0 on which the two-sided power sandwich

    lower_scale * d(x, S0)**k_upper  <=  f(x)  <=  upper_scale * d(x, S0)**k_lower

holds, and how to draw exact samples from itself. Models are immutable
once normalized; evaluation before normalization raises.

Catalog identifiers (usable from the CLI):

    powerlaw4_segment   d(x,S0)^4 on [0,1]^2, S0 a vertical segment
    example2            anisotropic power vanishing (exponent 2..4 by angle)
    polytail_1_3        |x|^{1/3} core with |x|^{-2} polynomial tail on R
    exptail_1_3         |x|^{1/3} core with exp(-2|x|) tail on R
    f_quadratic         (3/2) x^2 on [-1,1], S0 = {0}
    g_twobumps          (2/3) on [-1,-1/4] u [1/4,1]; a genuine 1-d hole
    h_parabolic         (3/8)(x^2+1) on [-1,1]; empty zero set
"""

from __future__ import annotations

import abc
import copy
import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import quadrature
from .errors import InfeasibleError, NormalizationPendingError
from .geometry import AxisBox, Box, Segment, SinglePoint, ZeroSet, _points_matrix

__all__ = [
    "SmoothnessOrders",
    "MinOutsideResult",
    "DensityModel",
    "PowerLawModel",
    "AnisotropicSegmentModel",
    "QuadraticModel",
    "TwoBumpsModel",
    "ParabolicModel",
    "PolynomialTailModel",
    "ExponentialTailModel",
    "evaluate",
    "normalize",
    "estimate_smoothness",
    "min_outside_neighborhood",
    "sup_density",
    "get_model",
    "CATALOG_IDS",
]


@dataclass(frozen=True)
class SmoothnessOrders:
    """Vanishing exponents and sandwich constants near the zero set."""

    k_upper: float
    k_lower: float
    lower_scale: float
    upper_scale: float

    def __post_init__(self):
        if not (0 < self.k_lower <= self.k_upper):
            raise ValueError("need 0 < k_lower <= k_upper")
        if not (self.lower_scale > 0 and self.upper_scale > 0):
            raise ValueError("sandwich scales must be positive")


class MinOutsideResult(NamedTuple):
    value: float
    method: str


class DensityModel(abc.ABC):
    """A probability density with a known zero set."""

    def __init__(self, model_id: str, dim: int, support: Box | None, zero_set: ZeroSet | None, eps0: float):
        self.model_id = model_id
        self.dim = dim
        self.support = support
        self.zero_set = zero_set
        self.eps0 = float(eps0)
        self._z: float | None = None

    @property
    def normalization(self) -> float | None:
        """Integral of the unnormalized form, or None while pending."""
        return self._z

    @abc.abstractmethod
    def unnormalized_density(self, pts: np.ndarray) -> np.ndarray:
        """Unnormalized density at an (n, d) array of points."""

    @abc.abstractmethod
    def _draw(self, rng: np.random.Generator, n: int) -> tuple[np.ndarray, float | None]:
        """Draw n points; returns (points, acceptance_rate or None)."""

    def pdf(self, points) -> np.ndarray | float:
        if self._z is None:
            raise NormalizationPendingError(self.model_id)
        pts, single = _points_matrix(points, self.dim)
        vals = self.unnormalized_density(pts) / self._z
        return float(vals[0]) if single else vals

    def normalized(self, rel_tol: float = 1e-6) -> "DensityModel":
        """Return a copy with the normalization constant computed."""
        if self._z is not None:
            return self
        out = copy.copy(self)
        out._z = self._compute_normalization(rel_tol)
        return out

    def _compute_normalization(self, rel_tol: float) -> float:
        value, _ = quadrature.integrate_regions(
            self.unnormalized_density, self._quadrature_regions(), rel_tol=rel_tol
        )
        return value

    def _quadrature_regions(self) -> list[Box]:
        if self.support is None:
            raise InfeasibleError(f"{self.model_id}: no generic quadrature on unbounded support")
        return [self.support]

    def smoothness_orders(self) -> SmoothnessOrders:
        raise ValueError(f"{self.model_id}: smoothness orders are not defined for this model")

    @abc.abstractmethod
    def sup_density(self) -> float:
        """Supremum of the normalized density."""

    def min_outside_neighborhood(self, eps: float, region: Box) -> MinOutsideResult:
        """Minimum of the density over region minus the eps-neighborhood of S0."""
        if not eps > 0:
            raise ValueError("eps must be positive")
        return self._grid_min_outside(eps, region)

    def _grid_min_outside(self, eps: float, region: Box) -> MinOutsideResult:
        # Fine-grid minimization, step <= eps/100 per axis.
        step = eps / 100.0
        axes = [
            np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) / step)) + 1))
            for lo, hi in zip(region.lower, region.upper)
        ]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        best = math.inf
        for i in range(0, len(pts), 1 << 20):
            chunk = pts[i : i + (1 << 20)]
            keep = np.ones(len(chunk), dtype=bool)
            if self.zero_set is not None:
                keep &= self.zero_set.distance(chunk) >= eps
            if self.support is not None:
                keep &= self.support.contains(chunk)
            if np.any(keep):
                best = min(best, float(np.min(self.pdf(chunk[keep]))))
        if not math.isfinite(best):
            raise InfeasibleError(
                f"{self.model_id}: region minus the {eps}-neighborhood of the zero set is empty"
            )
        return MinOutsideResult(best, "grid")


# ---------------------------------------------------------------------------
# rejection sampling against a flat envelope on a compact support


def _rejection_draw(model: DensityModel, rng: np.random.Generator, n: int,
                    envelope: float) -> tuple[np.ndarray, float]:
    """Uniform-envelope rejection on the unnormalized form.

    Chunk size is fixed so the accepted stream depends only on (model, seed).
    """
    chunk = 8192
    out = np.empty((n, model.dim), dtype=float)
    filled = proposals = accepted = 0
    while filled < n:
        cand = model.support.sample(rng, chunk)
        u = rng.random(chunk)
        keep = u * envelope < model.unnormalized_density(cand)
        proposals += chunk
        hits = cand[keep]
        accepted += len(hits)
        take = min(len(hits), n - filled)
        out[filled : filled + take] = hits[:take]
        filled += take
        if proposals >= 262144 and accepted / proposals < 1e-4:
            raise InfeasibleError(
                f"{model.model_id}: rejection acceptance rate "
                f"{accepted / proposals:.2e} < 1e-4; envelope misconfigured"
            )
    return out, accepted / proposals


_EX1_SEGMENT = ZeroSet([Segment([0.5, 0.25], [0.5, 0.75])])
_UNIT_SQUARE = Box([0.0, 0.0], [1.0, 1.0])


class PowerLawModel(DensityModel):
    """Density proportional to d(x, S0)**exponent on a compact box support.

    The default geometry is the vertical segment {1/2} x [1/4, 3/4] inside
    the unit square.
    """

    def __init__(self, exponent: float = 4.0, zero_set: ZeroSet | None = None,
                 support: Box | None = None, model_id: str | None = None):
        if not exponent > 0:
            raise ValueError("exponent must be positive")
        zero_set = zero_set if zero_set is not None else _EX1_SEGMENT
        support = support if support is not None else _UNIT_SQUARE
        super().__init__(
            model_id or f"powerlaw{exponent:g}_segment",
            support.dim,
            support,
            zero_set,
            eps0=1.0,
        )
        self.exponent = float(exponent)

    def unnormalized_density(self, pts: np.ndarray) -> np.ndarray:
        d = self.zero_set.distance(pts)
        vals = d**self.exponent
        vals[~self.support.contains(pts)] = 0.0
        return vals

    def _quadrature_regions(self) -> list[Box]:
        # Split the support at the zero set's bounding coordinates so each
        # cell sees a smooth branch of the distance field.
        breaks = [set([lo, hi]) for lo, hi in zip(self.support.lower, self.support.upper)]
        for comp in self.zero_set.components:
            if isinstance(comp, SinglePoint):
                coords = comp.point[None, :]
            elif isinstance(comp, Segment):
                coords = np.stack([comp.start, comp.end])
            else:
                coords = np.stack([comp.lower, comp.upper])
            for axis in range(self.dim):
                for v in coords[:, axis]:
                    if self.support.lower[axis] < v < self.support.upper[axis]:
                        breaks[axis].add(float(v))
        axes = [sorted(b) for b in breaks]
        boxes = []
        for idx in np.ndindex(*[len(a) - 1 for a in axes]):
            lo = [axes[k][i] for k, i in enumerate(idx)]
            hi = [axes[k][i + 1] for k, i in enumerate(idx)]
            boxes.append(Box(lo, hi))
        return boxes

    def _max_distance(self) -> float:
        if len(self.zero_set.components) == 1:
            # distance to a single convex primitive is convex, so the max
            # over a box is attained at a corner
            return float(np.max(self.zero_set.distance(self.support.corners())))
        pts = Box.sample(self.support, np.random.Generator(np.random.Philox(key=0)), 200000)
        return float(np.max(self.zero_set.distance(np.concatenate([pts, self.support.corners()]))))

    def sup_density(self) -> float:
        if self._z is None:
            raise NormalizationPendingError(self.model_id)
        return self._max_distance() ** self.exponent / self._z

    def smoothness_orders(self) -> SmoothnessOrders:
        if self._z is None:
            raise NormalizationPendingError(self.model_id)
        c = 1.0 / self._z
        return SmoothnessOrders(self.exponent, self.exponent, c, c)

    def min_outside_neighborhood(self, eps: float, region: Box) -> MinOutsideResult:
        if not eps > 0:
            raise ValueError("eps must be positive")
        same_region = (
            np.array_equal(region.lower, self.support.lower)
            and np.array_equal(region.upper, self.support.upper)
        )
        if same_region:
            # f increases with distance, so the minimum sits on the shell
            if eps >= self._max_distance():
                raise InfeasibleError(
                    f"{self.model_id}: eps-neighborhood swallows the whole support"
                )
            return MinOutsideResult(eps**self.exponent / self._z, "analytic")
        return self._grid_min_outside(eps, region)

    def _draw(self, rng, n):
        if self._z is None:
            raise NormalizationPendingError(self.model_id)
        envelope = self._max_distance() ** self.exponent
        return _rejection_draw(self, rng, n, envelope)


class AnisotropicSegmentModel(DensityModel):
    """Density vanishing on the segment with an angle-dependent exponent.

    Perpendicular to the segment the exponent is 4 on the right half-plane
    and 2 on the left. Around each endpoint the exponent interpolates
    linearly in the polar angle measured from the positive x direction, so
    it sweeps continuously from 4 back to 2. (A plain arctan of the slope
    ratio would jump across the vertical through the endpoints and break
    the two-sided power sandwich; the polar angle is the reading consistent
    with the stated exponent range [2, 4].)
    """

    def __init__(self):
        super().__init__("example2", 2, _UNIT_SQUARE, _EX1_SEGMENT, eps0=1.0)

    @staticmethod
    def exponent_field(pts: np.ndarray) -> np.ndarray:
        x, y = pts[:, 0], pts[:, 1]
        exp = np.full(len(pts), 4.0)
        band = (y >= 0.25) & (y <= 0.75)
        exp[band & (x < 0.5)] = 2.0
        upper = y > 0.75
        phi1 = np.arctan2(y[upper] - 0.75, x[upper] - 0.5)
        exp[upper] = 4.0 - (2.0 / np.pi) * phi1
        low = y < 0.25
        phi2 = np.arctan2(y[low] - 0.25, x[low] - 0.5)
        exp[low] = 4.0 + (2.0 / np.pi) * phi2
        return exp

    def unnormalized_density(self, pts: np.ndarray) -> np.ndarray:
        d = self.zero_set.distance(pts)
        vals = d ** self.exponent_field(pts)
        vals[~self.support.contains(pts)] = 0.0
        return vals

    def _quadrature_regions(self) -> list[Box]:
        xs = [0.0, 0.5, 1.0]
        ys = [0.0, 0.25, 0.75, 1.0]
        return [
            Box([xs[i], ys[j]], [xs[i + 1], ys[j + 1]])
            for i in range(2)
            for j in range(3)
        ]

    def sup_density(self) -> float:
        if self._z is None:
            raise NormalizationPendingError(self.model_id)
        # no closed form: dense grid plus the support corners
        axes = np.linspace(0.0, 1.0, 1501)
        gx, gy = np.meshgrid(axes, axes, indexing="ij")
        pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
        grid_max = float(np.max(self.unnormalized_density(pts)))
        corner_max = float(np.max(self.unnormalized_density(self.support.corners())))
        return max(grid_max, corner_max) / self._z

    def smoothness_orders(self) -> SmoothnessOrders:
        if self._z is None:
            raise NormalizationPendingError(self.model_id)
        c = 1.0 / self._z
        return SmoothnessOrders(4.0, 2.0, c, c)

    def min_outside_neighborhood(self, eps: float, region: Box) -> MinOutsideResult:
        if not eps > 0:
            raise ValueError("eps must be positive")
        same_region = (
            np.array_equal(region.lower, self.support.lower)
            and np.array_equal(region.upper, self.support.upper)
        )
        if same_region and eps < 1.0:
            max_dist = float(np.max(self.zero_set.distance(self.support.corners())))
            if eps >= max_dist:
                raise InfeasibleError(
                    f"{self.model_id}: eps-neighborhood swallows the whole support"
                )
            # exponent 4 is the fastest-vanishing direction, so for d < 1 the
            # shell minimum is eps^4 / Z
            return MinOutsideResult(eps**4 / self._z, "analytic")
        return self._grid_min_outside(eps, region)

    def _draw(self, rng, n):
        if self._z is None:
            raise NormalizationPendingError(self.model_id)
        envelope = self.sup_density() * self._z
        return _rejection_draw(self, rng, n, envelope)


class _InverseCdfModel(DensityModel):
    """1-d model sampled through a closed-form inverse CDF."""

    def _draw(self, rng, n):
        u = rng.random(n)
        return self.ppf(u)[:, None], None

    @abc.abstractmethod
    def ppf(self, u: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def cdf(self, x: np.ndarray) -> np.ndarray: ...


class QuadraticModel(_InverseCdfModel):
    """f(x) = (3/2) x^2 on [-1, 1]; the zero set is the origin."""

    def __init__(self):
        super().__init__("f_quadratic", 1, Box([-1.0], [1.0]), ZeroSet([SinglePoint([0.0])]), eps0=1.0)
        self._z = 1.0

    def unnormalized_density(self, pts):
        x = pts[:, 0]
        return np.where(np.abs(x) <= 1.0, 1.5 * x * x, 0.0)

    def ppf(self, u):
        return np.cbrt(2.0 * u - 1.0)

    def cdf(self, x):
        x = np.clip(x, -1.0, 1.0)
        return (x**3 + 1.0) / 2.0

    def sup_density(self):
        return 1.5

    def smoothness_orders(self):
        return SmoothnessOrders(2.0, 2.0, 1.5, 1.5)

    def min_outside_neighborhood(self, eps, region):
        if not eps > 0:
            raise ValueError("eps must be positive")
        lo, hi = float(region.lower[0]), float(region.upper[0])
        # |x| rises away from 0; candidate minima: the shell, or the region edge
        candidates = [t for t in (eps, abs(lo), abs(hi)) if eps <= t <= max(abs(lo), abs(hi))]
        feasible = [t for t in candidates if lo <= t <= hi or lo <= -t <= hi]
        if not feasible or eps > max(abs(lo), abs(hi)):
            raise InfeasibleError("region minus the eps-neighborhood is empty")
        return MinOutsideResult(1.5 * min(feasible) ** 2, "analytic")


class TwoBumpsModel(_InverseCdfModel):
    """f(x) = (2/3) on [-1,-1/4] u [1/4,1]: a full-dimensional hole at the center.

    The density jumps at the hole boundary instead of vanishing smoothly,
    so no power sandwich (and no smoothness orders) exists for it.
    """

    def __init__(self):
        super().__init__(
            "g_twobumps", 1, Box([-1.0], [1.0]), ZeroSet([AxisBox([-0.25], [0.25])]), eps0=0.75
        )
        self._z = 1.0

    def unnormalized_density(self, pts):
        # open at the hole boundary so the density vanishes exactly on the
        # declared zero set; a measure-zero choice of version
        x = pts[:, 0]
        return np.where((np.abs(x) > 0.25) & (np.abs(x) <= 1.0), 2.0 / 3.0, 0.0)

    def ppf(self, u):
        return np.where(u < 0.5, 1.5 * u - 1.0, 0.25 + 1.5 * (u - 0.5))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        left = np.clip((np.clip(x, -1.0, -0.25) + 1.0) * (2.0 / 3.0), 0.0, 0.5)
        right = np.clip((np.clip(x, 0.25, 1.0) - 0.25) * (2.0 / 3.0), 0.0, 0.5)
        return left + np.where(x >= 0.25, right, 0.0)

    def sup_density(self):
        return 2.0 / 3.0

    def min_outside_neighborhood(self, eps, region):
        if not eps > 0:
            raise ValueError("eps must be positive")
        if 0.25 + eps >= float(region.upper[0]) and -0.25 - eps <= float(region.lower[0]):
            raise InfeasibleError("region minus the eps-neighborhood is empty")
        return MinOutsideResult(2.0 / 3.0, "analytic")


class ParabolicModel(_InverseCdfModel):
    """f(x) = (3/8)(x^2 + 1) on [-1, 1]; strictly positive, empty zero set."""

    def __init__(self):
        super().__init__("h_parabolic", 1, Box([-1.0], [1.0]), None, eps0=1.0)
        self._z = 1.0

    def unnormalized_density(self, pts):
        x = pts[:, 0]
        return np.where(np.abs(x) <= 1.0, 0.375 * (x * x + 1.0), 0.0)

    def ppf(self, u):
        # CDF is (x^3 + 3x + 4)/8; the depressed cubic x^3 + 3x = 8u - 4 has
        # one real root (Cardano)
        q = 8.0 * u - 4.0
        root = np.sqrt(q * q / 4.0 + 1.0)
        return np.cbrt(q / 2.0 + root) + np.cbrt(q / 2.0 - root)

    def cdf(self, x):
        x = np.clip(x, -1.0, 1.0)
        return (x**3 + 3.0 * x + 4.0) / 8.0

    def sup_density(self):
        return 0.75

    def min_outside_neighborhood(self, eps, region):
        # empty zero set: the minimum over the region; f grows with |x|
        lo, hi = float(region.lower[0]), float(region.upper[0])
        t = 0.0 if lo <= 0.0 <= hi else min(abs(lo), abs(hi))
        return MinOutsideResult(0.375 * (t * t + 1.0), "analytic")


class _TailModel(_InverseCdfModel):
    """Univariate density with a power core near S0 = {0} and a decaying tail.

    Subclasses fix the tail branch. The continuity constraint ties the two
    branches at distance eps0. Arbitrary positive branch constants are
    admitted; the normalization constant rescales both.
    """

    def __init__(self, model_id, c1, c2, gamma, eps0):
        if not (c1 > 0 and c2 > 0 and gamma > 0 and eps0 > 0):
            raise ValueError("branch constants, gamma and eps0 must be positive")
        super().__init__(model_id, 1, None, ZeroSet([SinglePoint([0.0])]), eps0=eps0)
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.gamma = float(gamma)
        self._check_continuity()
        self._z = self._closed_form_mass()
        self._near_mass = 2.0 * self.c1 * self.eps0 ** (self.gamma + 1.0) / (self.gamma + 1.0) / self._z

    def _check_continuity(self):
        near = self.c1 * self.eps0**self.gamma
        far = self._tail_value_raw(self.eps0)
        if abs(near - far) > 1e-9 * max(near, far):
            raise ValueError(
                f"{self.model_id}: branch mismatch at eps0 ({near!r} vs {far!r}); "
                "the density would be discontinuous"
            )

    @abc.abstractmethod
    def _tail_value_raw(self, t): ...

    @abc.abstractmethod
    def _tail_mass_raw(self, b: float) -> float:
        """Unnormalized mass of both tails beyond |x| = b >= eps0."""

    @abc.abstractmethod
    def _tail_mass_inverse_raw(self, mass: float) -> float: ...

    def _closed_form_mass(self) -> float:
        near = 2.0 * self.c1 * self.eps0 ** (self.gamma + 1.0) / (self.gamma + 1.0)
        return near + self._tail_mass_raw(self.eps0)

    def value_at_distance(self, t) -> np.ndarray | float:
        t = np.asarray(t, dtype=float)
        vals = np.where(t < self.eps0, self.c1 * t**self.gamma, self._tail_value_raw(np.maximum(t, self.eps0))) / self._z
        return float(vals) if vals.ndim == 0 else vals

    def unnormalized_density(self, pts):
        t = np.abs(pts[:, 0])
        # clamp the tail argument: np.where evaluates both branches eagerly
        return np.where(t < self.eps0, self.c1 * t**self.gamma,
                        self._tail_value_raw(np.maximum(t, self.eps0)))

    def tail_mass_beyond(self, b: float) -> float:
        """Normalized probability mass of {|x| >= b} for b >= eps0."""
        if b < self.eps0:
            raise ValueError("tail mass formula only valid beyond eps0")
        return self._tail_mass_raw(b) / self._z

    def closed_form_halfwidth(self, delta: float) -> float:
        """Direct inversion of tail_mass_beyond(b) = delta."""
        return self._tail_mass_inverse_raw(delta * self._z)

    def _normalized_mass(self) -> float:
        return self._closed_form_mass() / self._z

    def ppf(self, u):
        w = 2.0 * u - 1.0
        sign = np.sign(w)
        w = np.abs(w)
        near = w < self._near_mass
        t = np.empty_like(w)
        # invert the radial CDF branchwise
        scale = self._z
        t[near] = (w[near] * scale * (self.gamma + 1.0) / (2.0 * self.c1)) ** (1.0 / (self.gamma + 1.0))
        t[~near] = self._tail_mass_inverse_raw(self._tail_mass_raw(self.eps0) - (w[~near] - self._near_mass) * scale)
        return sign * t

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        t = np.abs(x)
        radial = np.where(
            t < self.eps0,
            2.0 * self.c1 * t ** (self.gamma + 1.0) / (self.gamma + 1.0) / self._z,
            (self._tail_mass_raw(self.eps0) - self._tail_mass_raw(np.maximum(t, self.eps0))) / self._z
            + self._near_mass,
        )
        return 0.5 + 0.5 * np.sign(x) * radial

    def sup_density(self):
        return self.c1 * self.eps0**self.gamma / self._z

    def smoothness_orders(self):
        c = self.c1 / self._z
        return SmoothnessOrders(self.gamma, self.gamma, c, c)

    def min_outside_neighborhood(self, eps, region):
        if not eps > 0:
            raise ValueError("eps must be positive")
        lo, hi = float(region.lower[0]), float(region.upper[0])
        far = max(abs(lo), abs(hi))
        if eps >= far:
            raise InfeasibleError("region minus the eps-neighborhood is empty")
        # the density rises to eps0 and decays beyond: minimum at a boundary
        return MinOutsideResult(float(min(self.value_at_distance(eps), self.value_at_distance(far))), "analytic")


class PolynomialTailModel(_TailModel):
    """Core c1 |x|^gamma for |x| < eps0, tail c2 |x|^chi with chi < -1."""

    def __init__(self, c1=2.0 / 7.0, c2=2.0 / 7.0, gamma=1.0 / 3.0, chi=-2.0, eps0=1.0,
                 model_id=None):
        if not chi < -1.0:
            raise ValueError("polynomial tail needs chi < -d = -1 for integrability")
        self.chi = float(chi)
        super().__init__(model_id or "polytail", c1, c2, gamma, eps0)

    def _tail_value_raw(self, t):
        return self.c2 * np.asarray(t, dtype=float) ** self.chi

    def _tail_mass_raw(self, b):
        return 2.0 * self.c2 * b ** (self.chi + 1.0) / (-(self.chi + 1.0))

    def _tail_mass_inverse_raw(self, mass):
        return (mass * (-(self.chi + 1.0)) / (2.0 * self.c2)) ** (1.0 / (self.chi + 1.0))


class ExponentialTailModel(_TailModel):
    """Core c1 |x|^gamma for |x| < eps0, tail c2 exp(beta |x|) with beta < 0."""

    def __init__(self, c1=2.0 / 5.0, c2=None, gamma=1.0 / 3.0, beta=-2.0, eps0=1.0,
                 model_id=None):
        if not beta < 0:
            raise ValueError("exponential tail needs beta < 0")
        self.beta = float(beta)
        if c2 is None:
            c2 = c1 * eps0**gamma / math.exp(beta * eps0)
        super().__init__(model_id or "exptail", c1, c2, gamma, eps0)

    def _tail_value_raw(self, t):
        return self.c2 * np.exp(self.beta * np.asarray(t, dtype=float))

    def _tail_mass_raw(self, b):
        return 2.0 * self.c2 * np.exp(self.beta * np.asarray(b, dtype=float)) / (-self.beta)

    def _tail_mass_inverse_raw(self, mass):
        return np.log(mass * (-self.beta) / (2.0 * self.c2)) / self.beta


# ---------------------------------------------------------------------------
# module-level operations mirroring the library surface


def evaluate(model: DensityModel, x) -> np.ndarray | float:
    """Normalized density at x; zero outside the support and exactly on S0."""
    return model.pdf(x)


def normalize(model: DensityModel, rel_tol: float = 1e-6) -> DensityModel:
    """Return the model with its normalization constant computed."""
    return model.normalized(rel_tol)


def sup_density(model: DensityModel) -> float:
    return model.sup_density()


def min_outside_neighborhood(model: DensityModel, eps: float, region: Box) -> MinOutsideResult:
    return model.min_outside_neighborhood(eps, region)


def _shell_points(zero_set: ZeroSet, delta: float, n_directions: int) -> np.ndarray:
    """Points at distance exactly delta from the zero set, swept by direction."""
    pts = []
    for comp in zero_set.components:
        if isinstance(comp, SinglePoint) and comp.dim == 1:
            pts.append(comp.point + np.array([[delta], [-delta]]) )
        elif isinstance(comp, SinglePoint):
            theta = np.linspace(0.0, 2.0 * np.pi, n_directions, endpoint=False)
            circle = np.zeros((n_directions, comp.dim))
            circle[:, 0] = np.cos(theta)
            circle[:, 1] = np.sin(theta)
            pts.append(comp.point + delta * circle)
        elif isinstance(comp, Segment):
            axis = (comp.end - comp.start) / comp.length
            normal = np.array([-axis[1], axis[0]])
            k = max(8, n_directions // 4)
            t = np.linspace(0.0, 1.0, k)[:, None]
            interior = comp.start + t * (comp.end - comp.start)
            pts.append(interior + delta * normal)
            pts.append(interior - delta * normal)
            ang = np.linspace(-np.pi / 2, np.pi / 2, max(8, n_directions // 8))
            for endpoint, outward in ((comp.end, axis), (comp.start, -axis)):
                dirs = np.outer(np.cos(ang), outward) + np.outer(np.sin(ang), normal)
                pts.append(endpoint + delta * dirs)
        elif isinstance(comp, AxisBox) and comp.dim == 1:
            pts.append(np.array([[comp.lower[0] - delta], [comp.upper[0] + delta]]))
        else:
            raise ValueError(f"no shell construction for primitive {type(comp).__name__} in d={comp.dim}")
    return np.concatenate(pts, axis=0)


def estimate_smoothness(model: DensityModel, shells, n_directions: int = 256) -> tuple[float, float]:
    """Empirical vanishing exponents from directional shell sweeps.

    Evaluates the density on points at exact distance delta from S0 for each
    shell radius and regresses the log envelope values on log delta. The
    min-over-directions envelope estimates k_upper, the max envelope k_lower.
    """
    shells = [float(s) for s in shells]
    if len(shells) < 2 or any(b >= a for a, b in zip(shells, shells[1:])):
        raise ValueError("shells must be a strictly decreasing list of radii")
    if any(s >= model.eps0 for s in shells):
        raise ValueError(f"shell radii must be below eps0={model.eps0}")
    if model.zero_set is None:
        raise ValueError(f"{model.model_id}: no zero set to sweep around")
    log_min, log_max = [], []
    for delta in shells:
        pts = _shell_points(model.zero_set, delta, n_directions)
        if model.support is not None and not np.all(model.support.contains(pts)):
            raise ValueError(f"shell at delta={delta} leaves the support")
        vals = model.pdf(pts)
        if np.any(vals <= 0):
            raise ValueError(f"shell at delta={delta} hit a zero density value")
        log_min.append(math.log(float(np.min(vals))))
        log_max.append(math.log(float(np.max(vals))))
    logd = np.log(shells)
    k_upper = float(np.polyfit(logd, log_min, 1)[0])
    k_lower = float(np.polyfit(logd, log_max, 1)[0])
    return k_upper, k_lower


# ---------------------------------------------------------------------------
# catalog

_FACTORIES = {
    "powerlaw4_segment": lambda: PowerLawModel(4.0, model_id="powerlaw4_segment"),
    "example2": AnisotropicSegmentModel,
    "polytail_1_3": lambda: PolynomialTailModel(model_id="polytail_1_3"),
    "exptail_1_3": lambda: ExponentialTailModel(model_id="exptail_1_3"),
    "f_quadratic": QuadraticModel,
    "g_twobumps": TwoBumpsModel,
    "h_parabolic": ParabolicModel,
}

CATALOG_IDS = tuple(sorted(_FACTORIES))


@functools.lru_cache(maxsize=None)
def get_model(model_id: str) -> DensityModel:
    """Normalized catalog model by identifier."""
    try:
        factory = _FACTORIES[model_id]
    except KeyError:
        raise KeyError(f"unknown model {model_id!r}; catalog: {', '.join(CATALOG_IDS)}") from None
    return factory().normalized()
