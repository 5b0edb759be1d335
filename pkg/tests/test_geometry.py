import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerocover.geometry import (
    AxisBox,
    Ball,
    Segment,
    SinglePoint,
    ZeroSet,
    ball_intersects_zero_set,
    distance_to_zero_set,
    in_epsilon_neighborhood,
    zero_set_from_json,
    zero_set_to_json,
)

from oracles import brute_force_segment_distance

SEGMENT_S0 = ZeroSet([Segment([0.5, 0.25], [0.5, 0.75])])


class TestDistance:
    def test_perpendicular_foot_inside_segment(self):
        assert distance_to_zero_set(np.array([0.7, 0.5]), SEGMENT_S0) == pytest.approx(0.2, abs=1e-12)

    def test_nearest_endpoint_above(self):
        assert distance_to_zero_set(np.array([0.5, 0.9]), SEGMENT_S0) == pytest.approx(0.15, abs=1e-12)

    def test_nearest_endpoint_diagonal(self):
        d = distance_to_zero_set(np.array([0.8, 0.1]), SEGMENT_S0)
        assert d == pytest.approx(math.sqrt(0.1125), abs=1e-12)

    def test_zero_iff_on_set(self):
        assert distance_to_zero_set(np.array([0.5, 0.6]), SEGMENT_S0) == 0.0
        assert distance_to_zero_set(np.array([0.5000001, 0.6]), SEGMENT_S0) > 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            distance_to_zero_set(np.array([0.5, 0.5, 0.5]), SEGMENT_S0)

    def test_segment_brute_force_oracle(self):
        rng = np.random.default_rng(1)
        a, b = np.array([0.5, 0.25]), np.array([0.5, 0.75])
        step = np.linalg.norm(b - a) / (10_000 - 1)
        for x in rng.random((200, 2)):
            exact = distance_to_zero_set(x, SEGMENT_S0)
            brute = brute_force_segment_distance(x, a, b)
            assert exact <= brute + 1e-9
            assert brute - exact <= step / 2 + 1e-9

    def test_lipschitz_over_random_pairs(self):
        rng = np.random.default_rng(2)
        x = rng.random((10_000, 2)) * 2 - 0.5
        y = rng.random((10_000, 2)) * 2 - 0.5
        dx = np.asarray(SEGMENT_S0.distance(x))
        dy = np.asarray(SEGMENT_S0.distance(y))
        assert np.all(np.abs(dx - dy) <= np.linalg.norm(x - y, axis=1) + 1e-12)

    def test_multi_component_is_exact_min(self):
        c1 = Segment([0.5, 0.25], [0.5, 0.75])
        c2 = SinglePoint([0.1, 0.1])
        both = ZeroSet([c1, c2])
        rng = np.random.default_rng(3)
        pts = rng.random((5_000, 2))
        d = np.asarray(both.distance(pts))
        d1 = np.asarray(ZeroSet([c1]).distance(pts))
        d2 = np.asarray(ZeroSet([c2]).distance(pts))
        assert np.array_equal(d, np.minimum(d1, d2))

    def test_axis_box_distance(self):
        hole = ZeroSet([AxisBox([-0.25], [0.25])])
        assert distance_to_zero_set(np.array([0.5]), hole) == pytest.approx(0.25)
        assert distance_to_zero_set(np.array([0.1]), hole) == 0.0


class TestNeighborhood:
    def test_inside(self):
        assert in_epsilon_neighborhood(np.array([0.7, 0.5]), SEGMENT_S0, 0.25)

    def test_strict_at_boundary(self):
        # 0.75 - 0.5 is exactly 0.25 in binary floats, so distance == eps
        assert not in_epsilon_neighborhood(np.array([0.75, 0.5]), SEGMENT_S0, 0.25)

    def test_on_set(self):
        assert in_epsilon_neighborhood(np.array([0.5, 0.5]), SEGMENT_S0, 1e-12)

    def test_eps_must_be_positive(self):
        with pytest.raises(ValueError):
            in_epsilon_neighborhood(np.array([0.7, 0.5]), SEGMENT_S0, 0.0)


class TestBall:
    def test_center_on_set_intersects(self):
        assert ball_intersects_zero_set(Ball([0.5, 0.5], 0.1), SEGMENT_S0)

    def test_far_ball_does_not(self):
        assert not ball_intersects_zero_set(Ball([0.65, 0.5], 0.1), SEGMENT_S0)

    def test_near_ball_does(self):
        assert ball_intersects_zero_set(Ball([0.58, 0.5], 0.1), SEGMENT_S0)

    def test_open_ball_tangency_excluded(self):
        # 0.75 - 0.5 is exactly representable, so the distance equals the radius
        assert not ball_intersects_zero_set(Ball([0.75, 0.5], 0.25), SEGMENT_S0)

    def test_containment_is_strict(self):
        ball = Ball([0.0, 0.0], 0.5)
        assert not ball.contains(np.array([0.5, 0.0]))
        assert ball.contains(np.array([0.49999, 0.0]))


class TestValidation:
    def test_overlapping_components_rejected(self):
        with pytest.raises(ValueError, match="disjoint"):
            ZeroSet([Segment([0.0, 0.0], [1.0, 0.0]), SinglePoint([0.5, 0.0])])

    def test_degenerate_segment_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            Segment([0.1, 0.1], [0.1, 0.1])

    def test_box_ordering_rejected(self):
        with pytest.raises(ValueError):
            AxisBox([1.0], [0.0])

    def test_intrinsic_dimensions(self):
        assert SinglePoint([0.0, 0.0]).intrinsic_dimension == 0
        assert Segment([0.0, 0.0], [1.0, 0.0]).intrinsic_dimension == 1
        assert AxisBox([0.0, 0.0], [1.0, 0.0]).intrinsic_dimension == 1
        assert AxisBox([0.0, 0.0], [1.0, 1.0]).intrinsic_dimension == 2
        s = ZeroSet([Segment([0.5, 0.25], [0.5, 0.75]), SinglePoint([0.1, 0.1])])
        assert s.dimension == 1


def test_json_round_trip():
    s = ZeroSet([
        Segment([0.5, 0.25], [0.5, 0.75]),
        SinglePoint([0.1, 0.1]),
        AxisBox([0.8, 0.8], [0.9, 0.9]),
    ])
    back = zero_set_from_json(zero_set_to_json(s))
    pts = np.random.default_rng(4).random((100, 2))
    assert np.array_equal(np.asarray(s.distance(pts)), np.asarray(back.distance(pts)))


@given(
    x=st.tuples(st.floats(-2, 3), st.floats(-2, 3)),
    y=st.tuples(st.floats(-2, 3), st.floats(-2, 3)),
)
@settings(max_examples=200, deadline=None)
def test_lipschitz_property(x, y):
    dx = distance_to_zero_set(np.array(x), SEGMENT_S0)
    dy = distance_to_zero_set(np.array(y), SEGMENT_S0)
    assert abs(dx - dy) <= math.dist(x, y) + 1e-9
    assert dx >= 0.0
