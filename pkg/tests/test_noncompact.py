import math

import numpy as np
import pytest

from zerocover.covering import build_grid_covering, classify_covering, count_occupancy
from zerocover.density import ExponentialTailModel, PolynomialTailModel, get_model
from zerocover.errors import InfeasibleError
from zerocover.geometry import Box
from zerocover.noncompact import (
    binomial_containment_bound,
    build_truncation_schedule,
    fit_outside_min_decay,
    truncation_halfwidth,
)
from zerocover.rates import hoeffding_bound
from zerocover.sampling import sample

from oracles import midpoint_mass_1d


class TestTruncationHalfwidth:
    def test_polynomial_closed_form(self):
        b = truncation_halfwidth(get_model("polytail_1_3"), 0.1)
        assert b == pytest.approx(4.0 / (7.0 * 0.1), abs=1e-8)

    def test_exponential_root_satisfies_mass_identity(self):
        model = get_model("exptail_1_3")
        b = truncation_halfwidth(model, 0.1)
        # root of 2 * int_B^inf f = delta; equals 1 + log 2 for delta = 0.1
        assert model.tail_mass_beyond(b) == pytest.approx(0.1, abs=1e-8)
        assert b == pytest.approx(1.0 + math.log(2.0), abs=1e-8)

    @pytest.mark.parametrize("delta", [0.3, 0.1, 0.01, 0.001])
    @pytest.mark.parametrize("model_id", ["polytail_1_3", "exptail_1_3"])
    def test_bisection_agrees_with_closed_form(self, model_id, delta):
        model = get_model(model_id)
        assert truncation_halfwidth(model, delta) == pytest.approx(
            model.closed_form_halfwidth(delta), abs=1e-8
        )

    @pytest.mark.parametrize("model_id", ["polytail_1_3", "exptail_1_3"])
    def test_tail_mass_conservation(self, model_id):
        model = get_model(model_id)
        b = truncation_halfwidth(model, 0.05)
        inside = midpoint_mass_1d(model.pdf, -b, b, 4_000_000)
        assert inside == pytest.approx(1.0 - 0.05, abs=1e-6)

    def test_delta_too_large_rejected(self):
        # the whole tail beyond eps0 holds 4/7 for the polynomial catalog model
        with pytest.raises(InfeasibleError, match="eps0"):
            truncation_halfwidth(get_model("polytail_1_3"), 0.6)


class TestScheduleConstruction:
    def test_polynomial_gamma1_and_psi(self):
        sched = build_truncation_schedule(get_model("polytail_1_3"), eta=0.3, xi=0.1)
        assert sched.gamma1 == pytest.approx(1.0 / 3.0)
        assert sched.psi == pytest.approx(0.3)
        assert sched.psi <= sched.eta + 1e-12

    def test_xi_out_of_range(self):
        with pytest.raises(InfeasibleError, match="xi"):
            build_truncation_schedule(get_model("polytail_1_3"), eta=0.3, xi=0.25)

    def test_eta_out_of_range(self):
        with pytest.raises(InfeasibleError, match="eta"):
            build_truncation_schedule(get_model("polytail_1_3"), eta=1.2, xi=0.1)

    def test_monotone_sequences(self):
        sched = build_truncation_schedule(get_model("polytail_1_3"), eta=0.31, xi=0.1, m_delta=0.25)
        ns = [10**3, 10**4, 10**5, 10**6]
        deltas = [float(sched.delta(n)) for n in ns]
        widths = [sched.halfwidth(n) for n in ns]
        epss = [float(sched.eps(n)) for n in ns]
        assert all(a > b for a, b in zip(deltas, deltas[1:]))
        assert all(a < b for a, b in zip(widths, widths[1:]))
        assert all(a > b for a, b in zip(epss, epss[1:]))

    def test_validity_threshold(self):
        sched = build_truncation_schedule(get_model("polytail_1_3"), eta=0.31, xi=0.1, m_delta=0.25)
        n = sched.n_min
        assert float(sched.eps(n)) < 1.0
        assert float(sched.eps(n)) < sched.halfwidth(n)
        assert not float(sched.eps(n - 1)) < 1.0 or not float(sched.eps(n - 1)) < sched.halfwidth(n - 1)

    def test_halfwidth_growth_orders(self):
        ns = np.array([10**3, 10**4, 10**5, 10**6], dtype=float)
        poly = build_truncation_schedule(get_model("polytail_1_3"), eta=0.31, xi=0.1, m_delta=0.25)
        widths = np.array([poly.halfwidth(int(n)) for n in ns])
        slope = np.polyfit(np.log(ns), np.log(widths), 1)[0]
        assert slope == pytest.approx(0.05, abs=0.05)  # n^(xi/2) for chi = -2

        expo = build_truncation_schedule(get_model("exptail_1_3"), eta=0.37, xi=0.12, m_delta=0.65)
        ns = np.array([10**4, 10**5, 10**6, 10**7], dtype=float)
        widths = np.array([expo.halfwidth(int(n)) for n in ns])
        fit = np.polyfit(np.log(ns), widths, 1)
        # B grows like log n: linear in log n with slope xi / (2 |beta|)
        residual = widths - np.polyval(fit, np.log(ns))
        assert np.max(np.abs(residual)) < 1e-6
        assert fit[0] == pytest.approx(0.12 / 4.0, abs=0.05)


class TestMinDecay:
    def test_polynomial_slope(self):
        model = get_model("polytail_1_3")
        sched = build_truncation_schedule(model, eta=0.31, xi=0.1, m_delta=0.25)
        slope = fit_outside_min_decay(model, sched, [10**k for k in range(3, 7)])
        assert slope == pytest.approx(-0.1, abs=0.02)

    def test_exponential_slope(self):
        model = get_model("exptail_1_3")
        sched = build_truncation_schedule(model, eta=0.37, xi=0.12, m_delta=0.65)
        slope = fit_outside_min_decay(model, sched, [10**k for k in range(4, 8)])
        assert slope == pytest.approx(-0.12, abs=0.02)

    def test_constant_min_gives_flat_slope(self):
        # duck-typed schedule with an n-independent minimum
        class Flat:
            def min_density(self, n):
                return 0.375

        slope = fit_outside_min_decay(get_model("polytail_1_3"), Flat(), [10**k for k in range(3, 7)])
        assert slope == pytest.approx(0.0, abs=1e-12)

    def test_span_requirement(self):
        model = get_model("polytail_1_3")
        sched = build_truncation_schedule(model, eta=0.31, xi=0.1)
        with pytest.raises(ValueError, match="decades"):
            fit_outside_min_decay(model, sched, [1000, 2000, 4000])


class TestContainmentBound:
    def test_example_value(self):
        assert binomial_containment_bound(10**4, 0.1) == pytest.approx(
            1.0 - 2.0 * math.exp(-25.0), rel=1e-12
        )

    def test_vacuous_for_tiny_delta(self):
        assert binomial_containment_bound(100, 1e-4) == 0.0

    def test_sharper_variant_dominates(self):
        for n in (10, 100, 1000):
            assert hoeffding_bound(n, 0.05) >= binomial_containment_bound(n, 0.1)

    def test_empirical_containment_frequency(self):
        rng = np.random.default_rng(2024)
        n, delta = 1000, 0.1
        draws = rng.binomial(n, 1.0 - delta, size=10_000)
        inside = np.mean(((1 - 1.5 * delta) * n <= draws) & (draws <= (1 - 0.5 * delta) * n))
        assert inside >= binomial_containment_bound(n, delta)


class TestTruncatedDetection:
    def test_detection_events_on_truncated_support(self):
        """Compact-case pipeline on [-B, B] for a fast-vanishing tail.

        The catalog gamma = 1/3 tail cannot satisfy the inside-ball
        condition at any feasible (eta, xi) in d = 1, so the qualitative
        check uses a gamma = 4 member of the polynomial-tail family.
        """
        model = PolynomialTailModel(c1=5.0 / 12.0, c2=5.0 / 12.0, gamma=4.0, chi=-2.0,
                                    eps0=1.0, model_id="polytail_4")
        sched = build_truncation_schedule(model, eta=0.35, xi=0.14, m_delta=1.0)
        n = 10_000
        assert n >= sched.n_min
        eps = float(sched.eps(n))
        b = sched.halfwidth(n)
        r = 0.4 * n**-0.35
        covering = build_grid_covering(Box([-b], [b]), r)
        classified = classify_covering(covering, model.zero_set, eps)
        occupancy = count_occupancy(classified, sample(model, n, seed=555))
        assert occupancy.event_all_inside_empty
        assert occupancy.event_no_empty_outside


def test_general_dimension_rejected_for_bundled_tails():
    # the solver interface accepts d = 1 catalog tails only
    model = ExponentialTailModel()
    assert model.dim == 1
