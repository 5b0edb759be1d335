"""Truncation of unbounded supports for tail densities.

For a density on all of R with a decaying tail, the compact-case detection
machinery runs on the box [-B, B] holding probability mass 1 - delta. This
module solves for B given delta, assembles the joint (delta(n), B(n),
eps(n)) schedule, and fits the decay rate of the minimum density outside
the eps(n)-neighborhood.

The truncation half-width is always obtained by bracketed bisection on the
tail-mass identity 2 * integral_B^inf f = delta, then comparable closed
forms are exposed separately so hand-derived formulas can be audited
against the root. (One superficially plausible closed form for the
exponential tail, B = 1 - log(1 + (5/2) delta) / 2, fails the identity;
the solver's verification step rejects it.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import _TailModel
from .errors import InfeasibleError

__all__ = [
    "TruncationSchedule",
    "truncation_halfwidth",
    "build_truncation_schedule",
    "fit_outside_min_decay",
    "binomial_containment_bound",
]


def truncation_halfwidth(model: _TailModel, delta: float, tol: float = 1e-10) -> float:
    """Half-width B with P(|X| <= B) = 1 - delta, by bisection beyond eps0."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    delta_max = model.tail_mass_beyond(model.eps0)
    if delta >= delta_max:
        raise InfeasibleError(
            f"delta={delta} >= tail mass beyond eps0 ({delta_max:.6g}); "
            "the truncation box would not clear the core region"
        )
    lo = model.eps0
    hi = 2.0 * model.eps0
    for _ in range(200):
        if model.tail_mass_beyond(hi) < delta:
            break
        hi *= 2.0
    else:
        raise InfeasibleError("failed to bracket the truncation half-width")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if model.tail_mass_beyond(mid) > delta:
            lo = mid
        else:
            hi = mid
    b = 0.5 * (lo + hi)
    residual = abs(model.tail_mass_beyond(b) - delta)
    if residual > 1e-6:
        raise InfeasibleError(f"tail-mass identity violated at the root (residual {residual:.3g})")
    return b


@dataclass(frozen=True)
class TruncationSchedule:
    """Joint decay of the truncation level, box half-width, and neighborhood.

    delta(n) = m_delta * n^(-xi/2); B(n) solves the tail-mass identity at
    delta(n); eps(n) = (n^-xi / c1)^(1/gamma1) with gamma1 >= gamma chosen
    so that the implied psi = xi / gamma1 stays <= eta. The geometric
    requirements (B > eps0, eps < 1, eps < B) hold for all n >= n_min;
    below that the sequences are still well-defined formulas and are used
    as such by the decay fit.
    """

    model: _TailModel
    eta: float
    xi: float
    gamma1: float
    m_delta: float
    n_min: int

    @property
    def psi(self) -> float:
        return self.xi / self.gamma1

    def delta(self, n) -> float | np.ndarray:
        return self.m_delta * np.asarray(n, dtype=float) ** (-self.xi / 2.0)

    def halfwidth(self, n: int) -> float:
        return truncation_halfwidth(self.model, float(self.delta(n)))

    def eps(self, n) -> float | np.ndarray:
        c1 = self.model.c1 / self.model.normalization
        return (np.asarray(n, dtype=float) ** (-self.xi) / c1) ** (1.0 / self.gamma1)

    def min_density(self, n: int) -> float:
        """Closed-form recipe value min(c1 * eps(n)^gamma, tail value at B(n)).

        For n >= n_min (where eps(n) < eps0 <= B(n)) this equals the true
        minimum of the density over the truncation box minus the
        eps(n)-neighborhood, because the density rises with distance up to
        eps0 and decays beyond. Below n_min the power branch is evaluated
        as a formula so the decay fit can still use small sample sizes.
        """
        eps = float(self.eps(n))
        b = self.halfwidth(n)
        c1 = self.model.c1 / self.model.normalization
        near = c1 * eps**self.model.gamma
        return float(min(near, self.model.value_at_distance(b)))


def build_truncation_schedule(model: _TailModel, eta: float, xi: float,
                              m_delta: float = 0.25) -> TruncationSchedule:
    """Assemble the schedule for a tail model under the standard rate ranges."""
    d = model.dim
    if not 0 < eta < 1.0 / d:
        raise InfeasibleError(f"eta must lie in (0, 1/d) = (0, {1.0 / d}); got {eta}")
    xi_cap = (1.0 - 2.0 * eta * d) / 2.0
    if not 0 < xi < xi_cap:
        raise InfeasibleError(f"xi must lie in (0, (1-2*eta*d)/2) = (0, {xi_cap}); got {xi}")
    if not m_delta > 0:
        raise ValueError("m_delta must be positive")
    gamma1 = max(model.gamma, xi / eta)
    sched = TruncationSchedule(model=model, eta=eta, xi=xi, gamma1=gamma1,
                               m_delta=m_delta, n_min=1)
    n_min = _first_valid_n(sched)
    return TruncationSchedule(model=model, eta=eta, xi=xi, gamma1=gamma1,
                              m_delta=m_delta, n_min=n_min)


def _schedule_valid_at(sched: TruncationSchedule, n: int) -> bool:
    delta = float(sched.delta(n))
    if not delta < sched.model.tail_mass_beyond(sched.model.eps0):
        return False
    eps = float(sched.eps(n))
    if not eps < 1.0:
        return False
    return eps < sched.halfwidth(n)


def _first_valid_n(sched: TruncationSchedule, cap: int = 2**62) -> int:
    # delta decreases, eps decreases and B increases in n, so validity is
    # monotone: double to bracket, then bisect
    n = 1
    while not _schedule_valid_at(sched, n):
        n *= 2
        if n > cap:
            raise InfeasibleError("no sample size makes the truncation schedule valid")
    if n == 1:
        return 1
    lo, hi = n // 2, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _schedule_valid_at(sched, mid):
            hi = mid
        else:
            lo = mid
    return hi


def fit_outside_min_decay(model: _TailModel, sched: TruncationSchedule, ns) -> float:
    """Least-squares slope of log min-density against log n.

    Uses the schedule's closed-form recipe values; a slope near -xi confirms
    the intended decay order.
    """
    ns = [int(n) for n in ns]
    if len(ns) < 3 or min(ns) < 1:
        raise ValueError("need at least 3 positive sample sizes")
    if max(ns) / min(ns) < 100:
        raise ValueError("sample sizes should span at least two decades")
    values = [sched.min_density(n) for n in ns]
    slope = float(np.polyfit(np.log(ns), np.log(values), 1)[0])
    return slope


def binomial_containment_bound(n: int, delta: float) -> float:
    """P((1 - 3 delta/2) n <= n_delta <= (1 - delta/2) n) >= 1 - 2 exp(-(delta/2)^2 n).

    This is the conservative (delta/2)^2 exponent; hoeffding_bound(n, delta/2)
    in the rates module gives the sharper 2 gamma^2 version of the same event.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return max(0.0, 1.0 - 2.0 * math.exp(-((delta / 2.0) ** 2) * n))
