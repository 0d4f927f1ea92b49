"""Exact collision checks against linearly moving disc obstacles."""

from __future__ import annotations

import enum
import math
from typing import Sequence

from mortonrrt.scenario import Scenario

DEFAULT_SPACING = 0.25


class CollisionState(enum.Enum):
    NO_COLLISION = 0
    COLLISION = 1
    # only ever produced by memo-store lookups
    MISS = 2


NO_COLLISION = CollisionState.NO_COLLISION
COLLISION = CollisionState.COLLISION
MISS = CollisionState.MISS


class CollisionChecker:
    """Point and segment checks for one scenario.

    ``checks`` counts obstacle-position tests actually performed (early exit
    on the first hit), which is what the cost model charges for.
    """

    def __init__(self, scenario: Scenario, spacing: float = DEFAULT_SPACING, w_t: float = 1.0):
        if spacing <= 0:
            raise ValueError("sampling spacing must be > 0")
        self.scenario = scenario
        self.spacing = spacing
        self.w_t = w_t
        T = scenario.timesteps
        self._obs = [
            (
                o.start_pos[0],
                o.start_pos[1],
                (o.end_pos[0] - o.start_pos[0]) / T,
                (o.end_pos[1] - o.start_pos[1]) / T,
                o.radius * o.radius,
            )
            for o in scenario.obstacles
        ]
        self.checks = 0

    def _hit(self, x: float, y: float, t: float) -> bool:
        n = 0
        for ox, oy, vx, vy, r2 in self._obs:
            n += 1
            dx = x - (ox + t * vx)
            dy = y - (oy + t * vy)
            if dx * dx + dy * dy <= r2:
                self.checks += n
                return True
        self.checks += n
        return False

    def point(self, p) -> CollisionState:
        if not self.scenario.contains(p):
            raise ValueError(f"point {tuple(p)} lies outside the scenario")
        return COLLISION if self._hit(p[0], p[1], p[2]) else NO_COLLISION

    def n_intervals(self, a, b) -> int:
        """Power-of-two subdivision count keeping samples at most ``spacing`` apart."""
        dx, dy, dt = b[0] - a[0], b[1] - a[1], b[2] - a[2]
        length = math.sqrt(dx * dx + dy * dy + self.w_t * dt * dt)
        n = 1
        while length / n > self.spacing:
            n *= 2
        return n

    def segment(self, a, b) -> CollisionState:
        if not a[2] < b[2]:
            raise ValueError(f"segment must advance in time: {a[2]} -> {b[2]}")
        sc = self.scenario
        if not (sc.contains(a) and sc.contains(b)):
            raise ValueError("segment endpoint outside the scenario")
        n = self.n_intervals(a, b)
        ax, ay, at = a[0], a[1], a[2]
        dx, dy, dt = b[0] - ax, b[1] - ay, b[2] - at
        # endpoints first: cheapest way to catch the common case
        if self._hit(b[0], b[1], b[2]) or self._hit(ax, ay, at):
            return COLLISION
        for i in range(1, n):
            f = i / n
            if self._hit(ax + f * dx, ay + f * dy, at + f * dt):
                return COLLISION
        return NO_COLLISION


def point_collides(p, s: Scenario) -> CollisionState:
    return CollisionChecker(s).point(p)


def segment_collides(a, b, s: Scenario, h: float = DEFAULT_SPACING, w_t: float = 1.0) -> CollisionState:
    return CollisionChecker(s, h, w_t).segment(a, b)


def validate_path(
    path: Sequence, s: Scenario, h: float = DEFAULT_SPACING, w_t: float = 1.0, tol: float = 1e-9
) -> bool:
    """True iff ``path`` leaves the start, moves forward in time, never collides, and ends in the goal."""
    if not path:
        return False
    first, last = path[0], path[-1]
    if abs(first[0] - s.start[0]) > tol or abs(first[1] - s.start[1]) > tol:
        return False
    if math.hypot(last[0] - s.goal[0], last[1] - s.goal[1]) > s.goal_radius:
        return False
    checker = CollisionChecker(s, h, w_t)
    try:
        if len(path) == 1:
            return checker.point(first) is NO_COLLISION
        for a, b in zip(path, path[1:]):
            if not a[2] < b[2]:
                return False
            if checker.segment(a, b) is not NO_COLLISION:
                return False
    except ValueError:
        return False
    return True


def path_length(path: Sequence) -> float:
    """Length of the path projected onto the (x, y) plane."""
    return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(path, path[1:]))
