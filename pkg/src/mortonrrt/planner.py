"""Space-time RRT with optional Morton-store memoization of nearest-neighbor and collision queries."""

from __future__ import annotations

import dataclasses
import enum
import math
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from mortonrrt.collision import (
    COLLISION,
    DEFAULT_SPACING,
    NO_COLLISION,
    CollisionChecker,
    path_length,
)
from mortonrrt.cost import Backend, CostModel, OpCounter
from mortonrrt.memostore import MortonStore, StoreConfig
from mortonrrt.scenario import Scenario, SpaceTimePoint
from mortonrrt.spatial import KdIndex


class Variant(enum.Enum):
    BASELINE = "baseline"
    SW_MORTON = "sw-morton"
    HW_MORTON = "hw-morton"

    @property
    def backend(self) -> Backend:
        return Backend.HARDWARE if self is Variant.HW_MORTON else Backend.SOFTWARE

    @property
    def memoized(self) -> bool:
        return self is not Variant.BASELINE


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PlannerConfig:
    variant: Variant = Variant.BASELINE
    step: float = 1.0
    w_t: float = 1.0
    h: float = DEFAULT_SPACING
    max_iters: int = 1_000_000
    seed: int = 0
    store: StoreConfig = field(default_factory=StoreConfig)
    goal_bias: float = 0.05
    # exact point test of X_new when the store answers NO_COLLISION
    probe_endpoint: bool = True
    costs: CostModel = field(default_factory=CostModel)

    def __post_init__(self) -> None:
        if not self.step > 0:
            raise ConfigError(f"step must be > 0, got {self.step}")
        if not 0 <= self.goal_bias < 1:
            raise ConfigError(f"goal_bias must be in [0, 1), got {self.goal_bias}")
        if not self.w_t > 0:
            raise ConfigError(f"w_t must be > 0, got {self.w_t}")
        if not self.h > 0:
            raise ConfigError(f"h must be > 0, got {self.h}")
        if self.max_iters < 0:
            raise ConfigError("max_iters must be >= 0")


@dataclass
class PlanStats:
    N: int = 0
    L_count: int = 0
    iterations: int = 0
    alpha: float = 1.0
    beta: float = 1.0
    nn_store_hits: int = 0
    col_store_hits: int = 0
    exact_nn: int = 0
    exact_collision: int = 0
    col_queries: int = 0
    endpoint_probes: int = 0
    rejected_goals: int = 0
    counts: dict = field(default_factory=dict)
    backend: Backend = Backend.SOFTWARE
    costs: CostModel = field(default_factory=CostModel)
    wall_time: float = 0.0
    modeled_ops: float = 0.0
    modeled_cycles: float = 0.0
    store_ops: float = 0.0
    path_len: float = math.nan


@dataclass
class PlanResult:
    path: Optional[list[SpaceTimePoint]]
    stats: PlanStats

    @property
    def success(self) -> bool:
        return self.path is not None


def sample(rng: random.Random, s: Scenario, goal_bias: float) -> SpaceTimePoint:
    if goal_bias > 0 and rng.random() < goal_bias:
        return SpaceTimePoint(s.goal[0], s.goal[1], rng.random() * s.timesteps)
    l = s.edge_length
    return SpaceTimePoint(rng.random() * l, rng.random() * l, rng.random() * s.timesteps)


def steer(frm, toward, step: float, w_t: float = 1.0, s: Scenario | None = None) -> SpaceTimePoint:
    """Move from ``frm`` toward ``toward`` by at most ``step`` in the weighted metric."""
    ft = frm[2]
    if not toward[2] > ft:
        raise ValueError(f"steer must advance in time: {ft} -> {toward[2]}")
    dx, dy, dt = toward[0] - frm[0], toward[1] - frm[1], toward[2] - ft
    d = math.sqrt(dx * dx + dy * dy + w_t * dt * dt)
    if d <= step:
        x, y, t = toward[0], toward[1], toward[2]
    else:
        f = step / d
        x, y, t = frm[0] + f * dx, frm[1] + f * dy, ft + f * dt
    if s is not None:
        l = s.edge_length
        x = min(max(x, 0.0), l)
        y = min(max(y, 0.0), l)
        t = min(t, s.timesteps)
    if not t > ft:
        t = math.nextafter(ft, math.inf)
    return SpaceTimePoint(x, y, t)


def extract_path(points: list, parents: list, goal_node: int) -> list[SpaceTimePoint]:
    """Root-to-``goal_node`` walk over a parent-pointer tree (root's parent is -1)."""
    out = []
    i = goal_node
    while i >= 0:
        out.append(points[i])
        i = parents[i]
    out.reverse()
    return out


def plan(s: Scenario, cfg: PlannerConfig) -> PlanResult:
    """Grow a time-monotone RRT from ``s.start`` until a node lands in the goal disc.

    Memoized variants consult the Morton store before the exact nearest-neighbor
    search and before the exact edge check. Edges admitted on a memoized
    NO_COLLISION verdict are unverified; a goal candidate is accepted only after
    every unverified edge on its branch passes the exact check. A failing edge
    is detached: the subtree below it leaves the kd-index, its nodes are never
    extended again, and the store learns the child's true state.
    """
    memo = cfg.variant.memoized
    backend = cfg.variant.backend
    counter = OpCounter(cfg.costs, backend)
    rec = counter.counts
    store = (
        MortonStore(dataclasses.replace(cfg.store, backend=backend, w_t=cfg.w_t), counter) if memo else None
    )
    checker = CollisionChecker(s, cfg.h, cfg.w_t)
    index = KdIndex()
    rng = random.Random(cfg.seed)
    stats = PlanStats(L_count=s.n_obstacles, backend=backend, costs=cfg.costs)

    w_t, step, goal_bias = cfg.w_t, cfg.step, cfg.goal_bias
    probe = cfg.probe_endpoint
    gx, gy = s.goal
    gr2 = s.goal_radius * s.goal_radius

    root = SpaceTimePoint(float(s.start[0]), float(s.start[1]), 0.0)
    points = [root]
    parents = [-1]
    verified = [True]
    dead = [False]
    children: list[list[int]] = [[]]
    index.insert(root, 0)

    def detach(i: int) -> None:
        stack = [i]
        while stack:
            j = stack.pop()
            dead[j] = True
            index.remove(j)
            stack.extend(children[j])
        children[parents[i]].remove(i)
        store.morton_update(points[i], COLLISION, None)

    def accept(goal_node: int) -> Optional[list]:
        branch = []
        i = goal_node
        while i > 0:
            branch.append(i)
            i = parents[i]
        branch.reverse()
        for i in branch:
            if verified[i]:
                continue
            if checker.segment(points[parents[i]], points[i]) is NO_COLLISION:
                verified[i] = True
                continue
            if not reattach(i):
                detach(i)
            return None
        return extract_path(points, parents, goal_node)

    def reattach(i: int) -> bool:
        old = parents[i]
        q = index.nearest_before(points[i], w_t, exclude=old)
        stats.exact_nn += 1
        if q is None or checker.segment(points[q], points[i]) is not NO_COLLISION:
            return False
        children[old].remove(i)
        children[q].append(i)
        parents[i] = q
        verified[i] = True
        return True

    path = None
    t_start = time.perf_counter()
    if checker.point(root) is COLLISION:
        path = None
    elif (root[0] - gx) ** 2 + (root[1] - gy) ** 2 <= gr2:
        path = [root]
    else:
        col_before = checker.checks
        for _ in range(cfg.max_iters):
            stats.iterations += 1
            x_rand = sample(rng, s, goal_bias)
            nearest = None
            if memo:
                nearest = store.morton_nn(x_rand)
                if nearest is not None and dead[nearest]:
                    nearest = None
                if nearest is not None:
                    stats.nn_store_hits += 1
            if nearest is None:
                stats.exact_nn += 1
                nearest = index.nearest_before(x_rand, w_t)
                if nearest is None:
                    continue
            x_near = points[nearest]
            x_new = steer(x_near, x_rand, step, w_t, s)
            stats.col_queries += 1
            state = None
            if memo:
                state = store.morton_col(x_new)
                if state is NO_COLLISION:
                    stats.col_store_hits += 1
            exact = state is not NO_COLLISION
            if not exact and probe:
                stats.endpoint_probes += 1
                if checker.point(x_new) is COLLISION:
                    # the probe already settled it; no segment test needed
                    state = COLLISION
                    stats.col_store_hits -= 1
                    stats.exact_collision += 1
            elif exact:
                stats.exact_collision += 1
                state = checker.segment(x_near, x_new)
            new_id = len(points)
            if memo:
                store.morton_update(x_new, state, new_id if state is NO_COLLISION else None)
            if state is NO_COLLISION:
                points.append(x_new)
                parents.append(nearest)
                verified.append(exact)
                dead.append(False)
                children.append([])
                children[nearest].append(new_id)
                index.insert(x_new, new_id)
                if (x_new[0] - gx) ** 2 + (x_new[1] - gy) ** 2 <= gr2:
                    path = accept(new_id)
                    if path is not None:
                        break
                    stats.rejected_goals += 1
        rec["collision_check"] += checker.checks - col_before
    stats.wall_time = time.perf_counter() - t_start

    rec["sample"] += stats.iterations
    rec["steer"] += stats.col_queries
    rec["nn_visit"] += index.visits
    rec["tree_insert_visit"] += index.insert_visits
    stats.N = len(points)
    stats.counts = dict(rec)
    if stats.iterations:
        stats.beta = stats.exact_nn / stats.iterations
    if stats.col_queries:
        stats.alpha = stats.exact_collision / stats.col_queries
    stats.modeled_ops = counter.modeled_ops
    stats.modeled_cycles = counter.modeled_cycles
    stats.store_ops = counter.store_ops
    if path is not None:
        stats.path_len = path_length(path)
    return PlanResult(path, stats)
