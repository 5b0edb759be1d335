"""Rate schedules and the analytic probability bounds behind detection.

A schedule fixes the decay of the covering radius r(n) = M_r n^-eta and
the neighborhood width eps(n) = M_eps n^-psi. The two sufficient
conditions checked here are affine in (eta, psi):

    condition A (outside balls fill):   1 - 2 eta d - 2 k_upper psi > 0
    condition B (inside balls empty):   1 + d0 eta - k_lower eta - d eta < 0

Both are strict; a value of exactly zero fails. All probability bounds
clamp into [0, 1] since the raw expressions can leave the unit interval
at small n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .density import SmoothnessOrders
from .errors import InfeasibleError

__all__ = [
    "RateSchedule",
    "ConditionReport",
    "schedule_values",
    "check_conditions",
    "check_conditions_multi",
    "ball_volume",
    "hoeffding_bound",
    "inside_ball_mass_upper",
    "outside_ball_mass_lower",
    "outside_nonempty_prob_bound",
]


@dataclass(frozen=True)
class RateSchedule:
    """Decay exponents and multipliers for (r(n), eps(n))."""

    dim: int
    eta: float
    psi: float
    xi: float
    m_r: float
    m_eps: float

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if not 0 < self.eta < 1.0 / self.dim:
            raise ValueError(f"eta must lie in (0, 1/d) = (0, {1.0 / self.dim}); got {self.eta}")
        if not 0 < self.psi <= self.eta:
            raise ValueError(f"psi must lie in (0, eta]; got {self.psi}")
        xi_cap = (1.0 - 2.0 * self.eta * self.dim) / 2.0
        if not 0 < self.xi < xi_cap:
            raise ValueError(f"xi must lie in (0, (1-2*eta*d)/2) = (0, {xi_cap}); got {self.xi}")
        if not (self.m_r > 0 and self.m_eps > 0):
            raise ValueError("multipliers must be positive")

    def radius(self, n: int) -> float:
        return self.m_r * n ** (-self.eta)

    def eps(self, n: int) -> float:
        return self.m_eps * n ** (-self.psi)

    def min_valid_n(self) -> int | None:
        """Smallest n at which both 2r <= eps and eps < 1 hold, None if never."""
        candidates = [1]
        if 2.0 * self.m_r > self.m_eps:
            if self.eta == self.psi:
                return None
            candidates.append((2.0 * self.m_r / self.m_eps) ** (1.0 / (self.eta - self.psi)))
        if self.m_eps >= 1.0:
            candidates.append(self.m_eps ** (1.0 / self.psi) + 1e-12)
        n = int(math.ceil(max(candidates)))
        while not self._feasible(n):
            n += 1
        return n

    def _feasible(self, n: int) -> bool:
        r, eps = self.radius(n), self.eps(n)
        return 2.0 * r <= eps < 1.0

    def values(self, n: int) -> tuple[float, float]:
        """(r(n), eps(n)), enforcing 2r <= eps < 1."""
        if n < 1:
            raise ValueError("n must be at least 1")
        r, eps = self.radius(n), self.eps(n)
        if 2.0 * r > eps or eps >= 1.0:
            start = self.min_valid_n()
            hint = f"; the schedule first becomes valid at n={start}" if start else "; no n satisfies it"
            violated = "2r(n) <= eps(n)" if 2.0 * r > eps else "eps(n) < 1"
            raise InfeasibleError(
                f"schedule violates {violated} at n={n} (r={r}, eps={eps}){hint}"
            )
        return r, eps


def schedule_values(schedule: RateSchedule, n: int) -> tuple[float, float]:
    return schedule.values(n)


@dataclass(frozen=True)
class ConditionReport:
    """Evaluated sufficient conditions, with the raw margin values echoed."""

    condition_A_value: float
    condition_A_holds: bool
    condition_B_value: float
    condition_B_holds: bool
    # informational: 1 - 2 eta d - 2 xi > 0 is implied by the xi range but
    # reported separately for transparency
    xi_margin_value: float
    xi_margin_holds: bool
    binding_component_A: int | None = None
    binding_component_B: int | None = None
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "condition_A_value": self.condition_A_value,
            "condition_A_holds": self.condition_A_holds,
            "condition_B_value": self.condition_B_value,
            "condition_B_holds": self.condition_B_holds,
            "xi_margin_value": self.xi_margin_value,
            "xi_margin_holds": self.xi_margin_holds,
            "binding_component_A": self.binding_component_A,
            "binding_component_B": self.binding_component_B,
            "inputs": self.inputs,
        }
        return json.dumps(payload, sort_keys=True)


def _condition_a(dim: int, k_upper: float, eta: float, psi: float) -> float:
    return 1.0 - 2.0 * eta * dim - 2.0 * k_upper * psi


def _condition_b(dim: int, zero_dim: int, k_lower: float, eta: float) -> float:
    return 1.0 + zero_dim * eta - k_lower * eta - dim * eta


def check_conditions(dim: int, zero_dim: int, orders: SmoothnessOrders,
                     schedule: RateSchedule) -> ConditionReport:
    """Evaluate both sufficient conditions for a single-component zero set."""
    if not zero_dim < dim:
        raise ValueError("the zero set must have dimension strictly below the ambient dimension")
    a = _condition_a(dim, orders.k_upper, schedule.eta, schedule.psi)
    b = _condition_b(dim, zero_dim, orders.k_lower, schedule.eta)
    xi_margin = 1.0 - 2.0 * schedule.eta * dim - 2.0 * schedule.xi
    return ConditionReport(
        condition_A_value=a,
        condition_A_holds=a > 0,
        condition_B_value=b,
        condition_B_holds=b < 0,
        xi_margin_value=xi_margin,
        xi_margin_holds=xi_margin > 0,
        inputs={
            "d": dim, "d0": zero_dim, "k_upper": orders.k_upper, "k_lower": orders.k_lower,
            "eta": schedule.eta, "psi": schedule.psi, "xi": schedule.xi,
        },
    )


def check_conditions_multi(dim: int, components, schedule: RateSchedule) -> ConditionReport:
    """Multi-component variant: A takes the min margin, B the max, over components.

    `components` is a sequence of (zero_dim, SmoothnessOrders) pairs.
    """
    components = list(components)
    if not components:
        raise ValueError("need at least one component")
    a_vals = [_condition_a(dim, o.k_upper, schedule.eta, schedule.psi) for _, o in components]
    b_vals = [_condition_b(dim, z, o.k_lower, schedule.eta) for z, o in components]
    ia = int(np.argmin(a_vals))
    ib = int(np.argmax(b_vals))
    xi_margin = 1.0 - 2.0 * schedule.eta * dim - 2.0 * schedule.xi
    return ConditionReport(
        condition_A_value=a_vals[ia],
        condition_A_holds=a_vals[ia] > 0,
        condition_B_value=b_vals[ib],
        condition_B_holds=b_vals[ib] < 0,
        xi_margin_value=xi_margin,
        xi_margin_holds=xi_margin > 0,
        binding_component_A=ia,
        binding_component_B=ib,
        inputs={
            "d": dim,
            "components": [
                {"d0": z, "k_upper": o.k_upper, "k_lower": o.k_lower} for z, o in components
            ],
            "eta": schedule.eta, "psi": schedule.psi, "xi": schedule.xi,
        },
    )


def ball_volume(dim: int, r: float) -> float:
    """Lebesgue volume of a d-ball of radius r, via log-gamma for stability."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if not r > 0:
        raise ValueError("radius must be positive")
    return math.exp(0.5 * dim * math.log(math.pi) - math.lgamma(0.5 * dim + 1.0) + dim * math.log(r))


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def hoeffding_bound(n: int, gamma: float) -> float:
    """Two-sided binomial concentration: P(|X - pn| <= gamma n) >= 1 - 2 e^{-2 gamma^2 n}."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    return _clamp01(1.0 - 2.0 * math.exp(-2.0 * gamma**2 * n))


def inside_ball_mass_upper(orders: SmoothnessOrders, dim: int, r: float) -> float:
    """Upper bound on the mass of any ball meeting the zero set.

    Every point of such a ball sits within 2r of the zero set, so the
    density there is at most upper_scale * (2r)^k_lower.
    """
    if not r > 0:
        raise ValueError("radius must be positive")
    return _clamp01(orders.upper_scale * ball_volume(dim, r) * (2.0 * r) ** orders.k_lower)


def outside_ball_mass_lower(orders: SmoothnessOrders, dim: int, r: float, eps: float,
                            min_density: float, boundary: bool = False) -> float:
    """Lower bound on the mass of a ball centered outside the eps-neighborhood.

    The density inside the ball is at least min(lower_scale (eps-r)^k_upper,
    min_density); `boundary=True` halves the available volume per axis for
    balls that poke outside the support.
    """
    if not eps > r:
        raise InfeasibleError(f"need eps > r for the outside bound, got eps={eps}, r={r}")
    density_floor = min(orders.lower_scale * (eps - r) ** orders.k_upper, min_density)
    bound = ball_volume(dim, r) * density_floor
    if boundary:
        bound *= 0.5**dim
    return _clamp01(bound)


def outside_nonempty_prob_bound(p_ball: float, n: int) -> float:
    """P(ball not empty) >= 1 - 2 exp(-p^2 n / 2), valid once n p >= 1."""
    if not 0 < p_ball <= 1:
        raise ValueError("p_ball must be a probability in (0, 1]")
    if n * p_ball < 1.0:
        raise InfeasibleError(
            f"the bound needs n * p_ball >= 1; got n={n}, p={p_ball} (n*p={n * p_ball})"
        )
    return _clamp01(1.0 - 2.0 * math.exp(-0.5 * p_ball**2 * n))
