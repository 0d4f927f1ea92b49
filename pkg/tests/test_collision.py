import math

import pytest
from hypothesis import given, strategies as st

from mortonrrt.collision import (
    COLLISION,
    MISS,
    NO_COLLISION,
    CollisionChecker,
    path_length,
    point_collides,
    segment_collides,
    validate_path,
)
from mortonrrt.scenario import ObstacleTrack, Scenario, SpaceTimePoint as P, generate_synthetic, obstacle_position_at


def dense_oracle(a, b, s, h):
    """Samples the segment a hundred times finer than the checker does."""
    n = max(1, math.ceil(math.dist(a, b) / (h / 100)))
    for i in range(n + 1):
        f = i / n
        x, y, t = (a[j] + f * (b[j] - a[j]) for j in range(3))
        for o in s.obstacles:
            ox, oy = obstacle_position_at(o, t, s.timesteps)
            if math.hypot(x - ox, y - oy) <= o.radius:
                return COLLISION
    return NO_COLLISION


def test_point_examples(crossing_scenario, empty_scenario):
    assert point_collides(P(5, 6, 10), crossing_scenario) is COLLISION
    assert point_collides(P(5, 8, 10), crossing_scenario) is NO_COLLISION
    assert point_collides(P(3, 3, 3), empty_scenario) is NO_COLLISION


def test_point_out_of_bounds(crossing_scenario):
    with pytest.raises(ValueError):
        point_collides(P(5, 6, 30), crossing_scenario)


def test_exact_checks_never_miss(crossing_scenario):
    c = CollisionChecker(crossing_scenario)
    for x in range(0, 21, 2):
        assert c.point(P(x, x, x)) is not MISS


def test_segment_clear(crossing_scenario):
    # obstacle is at (5,5) at t=10; stay > radius + h away the whole time
    assert segment_collides(P(15, 0, 9), P(15, 2, 11), crossing_scenario) is NO_COLLISION


def test_segment_endpoint_inside(crossing_scenario):
    assert segment_collides(P(10, 10, 9), P(5, 5, 10), crossing_scenario) is COLLISION


def test_segment_crossing_center(crossing_scenario):
    a, b = P(2, 8, 9.5), P(8, 2, 10.5)
    assert dense_oracle(a, b, crossing_scenario, 0.25) is COLLISION
    assert segment_collides(a, b, crossing_scenario, h=0.25) is COLLISION


def test_segment_needs_forward_time(crossing_scenario):
    with pytest.raises(ValueError):
        segment_collides(P(1, 1, 2), P(2, 2, 2), crossing_scenario)


@given(st.integers(0, 10_000))
def test_refining_never_clears_a_collision(seed):
    import random

    rng = random.Random(seed)
    s = generate_synthetic(30, 10, 6, seed)
    t0 = rng.uniform(0, 9)
    a = P(rng.uniform(0, 30), rng.uniform(0, 30), t0)
    b = P(min(30, max(0, a.x + rng.uniform(-3, 3))), min(30, max(0, a.y + rng.uniform(-3, 3))), rng.uniform(t0 + 0.01, 10))
    verdicts = [CollisionChecker(s, h).segment(a, b) for h in (1.0, 0.5, 0.3, 0.25, 0.1, 0.01)]
    first = verdicts.index(COLLISION) if COLLISION in verdicts else len(verdicts)
    assert all(v is COLLISION for v in verdicts[first:])
    if dense_oracle(a, b, s, 0.25) is NO_COLLISION:
        assert verdicts[3] is NO_COLLISION


@given(st.permutations(list(range(5))), st.integers(0, 1000))
def test_point_check_ignores_obstacle_order(perm, seed):
    s = generate_synthetic(20, 10, 5, seed, radius=4.0)
    shuffled = Scenario(s.edge_length, s.timesteps, tuple(s.obstacles[i] for i in perm))
    for i in range(50):
        p = P((i * 7.3) % 20, (i * 3.1) % 20, (i * 0.37) % 10)
        assert point_collides(p, s) is point_collides(p, shuffled)


def test_validate_straight_path(empty_scenario):
    l, T = empty_scenario.edge_length, empty_scenario.timesteps
    assert validate_path([P(0, 0, 0), P(l, l, T)], empty_scenario)


def test_validate_rejects_time_reversal(empty_scenario):
    assert not validate_path([P(0, 0, 0), P(10, 10, 5), P(20, 20, 4)], empty_scenario)


def test_validate_rejects_pierced_obstacle(crossing_scenario):
    path = [P(0, 0, 0), P(2, 8, 9.5), P(8, 2, 10.5), P(20, 20, 20)]
    assert dense_oracle(path[1], path[2], crossing_scenario, 0.25) is COLLISION
    assert not validate_path(path, crossing_scenario)


def test_validate_rejects_wrong_endpoints(empty_scenario):
    assert not validate_path([P(1, 0, 0), P(20, 20, 5)], empty_scenario)
    assert not validate_path([P(0, 0, 0), P(15, 15, 5)], empty_scenario)
    assert not validate_path([], empty_scenario)


def test_path_length():
    assert path_length([P(0, 0, 0), P(3, 4, 1)]) == 5
    assert path_length([P(0, 0, 0)]) == 0
    assert path_length([P(0, 0, 0), P(3, 4, 1), P(6, 8, 2)]) == 10
