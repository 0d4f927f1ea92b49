"""Incremental kd-tree over (x, y, t) answering nearest-neighbor queries restricted to earlier times."""

from __future__ import annotations

import math
from typing import Iterable, Optional

INF = math.inf


def _dist2(ax, ay, at, bx, by, bt, w_t):
    dx = ax - bx
    dy = ay - by
    dt = at - bt
    return dx * dx + dy * dy + w_t * dt * dt


class KdIndex:
    """Append-only 3-d tree; node ``i`` holds the ``i``-th inserted point.

    Every node also keeps the bounding box of its subtree, which drives both
    distance pruning and the time filter (a subtree whose earliest point is
    not before the query time cannot contribute). Points arrive in tree-growth
    order, which is far from random, so the whole tree is rebuilt balanced
    each time its size doubles. Removed refs stay in the structure but are
    never returned.
    """

    rebuild_from = 32

    def __init__(self) -> None:
        self.xs: list[float] = []
        self.ys: list[float] = []
        self.ts: list[float] = []
        self.refs: list[int] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._axis: list[int] = []
        # subtree bounding boxes
        self._x0: list[float] = []
        self._x1: list[float] = []
        self._y0: list[float] = []
        self._y1: list[float] = []
        self._t0: list[float] = []
        self._t1: list[float] = []
        self._root = 0
        self._next_rebuild = self.rebuild_from
        self._removed: set[int] = set()
        self.visits = 0
        self.insert_visits = 0

    def __len__(self) -> int:
        return len(self.xs)

    def insert(self, p, ref: int) -> None:
        x, y, t = float(p[0]), float(p[1]), float(p[2])
        new = len(self.xs)
        coord = (x, y, t)
        axis = 0
        if new:
            node = self._root
            left, right = self._left, self._right
            while True:
                self.insert_visits += 1
                self._grow(node, x, y, t)
                a = self._axis[node]
                split = (self.xs, self.ys, self.ts)[a][node]
                if coord[a] < split:
                    nxt = left[node]
                    if nxt < 0:
                        left[node] = new
                        break
                else:
                    nxt = right[node]
                    if nxt < 0:
                        right[node] = new
                        break
                node = nxt
            axis = (a + 1) % 3
        self.xs.append(x)
        self.ys.append(y)
        self.ts.append(t)
        self.refs.append(ref)
        self._left.append(-1)
        self._right.append(-1)
        self._axis.append(axis)
        self._x0.append(x)
        self._x1.append(x)
        self._y0.append(y)
        self._y1.append(y)
        self._t0.append(t)
        self._t1.append(t)
        if len(self.xs) >= self._next_rebuild:
            self.rebuild()
            self._next_rebuild = 2 * len(self.xs)

    def remove(self, ref: int) -> None:
        """Exclude ``ref`` from all future query results."""
        self._removed.add(ref)

    def rebuild(self) -> None:
        """Rebalance with median splits, cycling x, y, t."""
        coords = (self.xs, self.ys, self.ts)
        left, right, axes = self._left, self._right, self._axis

        def build(ids: list[int], depth: int) -> int:
            self.insert_visits += len(ids)
            a = depth % 3
            c = coords[a]
            ids.sort(key=c.__getitem__)
            m = len(ids) // 2
            node = ids[m]
            axes[node] = a
            left[node] = build(ids[:m], depth + 1) if m else -1
            right[node] = build(ids[m + 1 :], depth + 1) if m + 1 < len(ids) else -1
            self._x0[node] = self._x1[node] = self.xs[node]
            self._y0[node] = self._y1[node] = self.ys[node]
            self._t0[node] = self._t1[node] = self.ts[node]
            for ch in (left[node], right[node]):
                if ch >= 0:
                    self._x0[node] = min(self._x0[node], self._x0[ch])
                    self._x1[node] = max(self._x1[node], self._x1[ch])
                    self._y0[node] = min(self._y0[node], self._y0[ch])
                    self._y1[node] = max(self._y1[node], self._y1[ch])
                    self._t0[node] = min(self._t0[node], self._t0[ch])
                    self._t1[node] = max(self._t1[node], self._t1[ch])
            return node

        if self.xs:
            self._root = build(list(range(len(self.xs))), 0)

    def _grow(self, i: int, x: float, y: float, t: float) -> None:
        if x < self._x0[i]:
            self._x0[i] = x
        elif x > self._x1[i]:
            self._x1[i] = x
        if y < self._y0[i]:
            self._y0[i] = y
        elif y > self._y1[i]:
            self._y1[i] = y
        if t < self._t0[i]:
            self._t0[i] = t
        elif t > self._t1[i]:
            self._t1[i] = t

    def nearest_before(self, q, w_t: float = 1.0, exclude: int = -1) -> Optional[int]:
        """Ref of the closest stored point with ``t < q.t``; ties go to the smallest ref.

        Distance is ``sqrt(dx^2 + dy^2 + w_t * dt^2)``. Returns None when no
        stored point is strictly earlier than ``q``.
        """
        if not self.xs:
            return None
        qx, qy, qt = float(q[0]), float(q[1]), float(q[2])
        xs, ys, ts, refs = self.xs, self.ys, self.ts, self.refs
        x0, x1, y0, y1, t0, t1 = self._x0, self._x1, self._y0, self._y1, self._t0, self._t1
        left, right, axes = self._left, self._right, self._axis
        removed = self._removed
        best_d = INF
        best_ref = -1
        visits = 0
        stack = [self._root]
        pop, push = stack.pop, stack.append
        while stack:
            i = pop()
            if t0[i] >= qt:
                continue
            # lower bound from the subtree box; equality must not prune (tie-break)
            g = x0[i] - qx
            if g < 0.0:
                g = qx - x1[i]
                if g < 0.0:
                    g = 0.0
            lb = g * g
            g = y0[i] - qy
            if g < 0.0:
                g = qy - y1[i]
                if g < 0.0:
                    g = 0.0
            lb += g * g
            g = t0[i] - qt
            if g < 0.0:
                g = qt - t1[i]
                if g < 0.0:
                    g = 0.0
            lb += w_t * g * g
            if lb > best_d:
                continue
            visits += 1
            px, py, pt = xs[i], ys[i], ts[i]
            if pt < qt and refs[i] != exclude and (not removed or refs[i] not in removed):
                dx = px - qx
                dy = py - qy
                dt = pt - qt
                d = dx * dx + dy * dy + w_t * dt * dt
                if d < best_d or (d == best_d and refs[i] < best_ref):
                    best_d = d
                    best_ref = refs[i]
            lc, rc = left[i], right[i]
            a = axes[i]
            diff = (qx - px) if a == 0 else (qy - py) if a == 1 else (qt - pt)
            # push the far side first so the near side is explored first
            if diff < 0.0:
                if rc >= 0:
                    push(rc)
                if lc >= 0:
                    push(lc)
            else:
                if lc >= 0:
                    push(lc)
                if rc >= 0:
                    push(rc)
        self.visits += visits
        return None if best_ref < 0 else best_ref


def nearest_before_linear(points: Iterable, q, w_t: float = 1.0) -> Optional[int]:
    """Exhaustive-scan version of :meth:`KdIndex.nearest_before` over ``(point, ref)`` pairs."""
    qx, qy, qt = float(q[0]), float(q[1]), float(q[2])
    best_d = INF
    best_ref = None
    for p, ref in points:
        if not float(p[2]) < qt:
            continue
        d = _dist2(float(p[0]), float(p[1]), float(p[2]), qx, qy, qt, w_t)
        if d < best_d or (d == best_d and ref < best_ref):
            best_d = d
            best_ref = ref
    return best_ref
