"""The Morton store: a bounded, fully associative memo of recent tree nodes and collision states.

One line per masked Morton key; each line keeps a ring of the most recent
entries. Line replacement is least-recently-referenced. Software and hardware
backends share these semantics exactly and differ only in what the
:class:`~mortonrrt.cost.OpCounter` charges per operation.
"""

from __future__ import annotations

import math
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from mortonrrt.collision import COLLISION, MISS, NO_COLLISION, CollisionState
from mortonrrt.cost import Backend, CostModel, OpCounter
from mortonrrt.morton import QuantConfig, make_keyer

ADDRESS_BYTES = 8
NN_POLICIES = ("closest", "recent")


@dataclass(frozen=True)
class StoreConfig:
    capacity_bytes: int = 32768
    line_bytes: int = 64
    entries_per_line: int = 8
    quant: QuantConfig = field(default_factory=QuantConfig)
    backend: Backend = Backend.SOFTWARE
    # which time-valid entry of a hit line morton_nn returns
    nn_policy: str = "closest"
    w_t: float = 1.0

    def __post_init__(self) -> None:
        if self.nn_policy not in NN_POLICIES:
            raise ValueError(f"nn_policy must be one of {NN_POLICIES}, got {self.nn_policy!r}")
        if self.capacity_bytes < 0 or self.line_bytes <= 0:
            raise ValueError("capacity_bytes must be >= 0 and line_bytes > 0")
        if self.entries_per_line * ADDRESS_BYTES != self.line_bytes:
            raise ValueError(
                f"{self.entries_per_line} entries of {ADDRESS_BYTES} bytes do not fill a "
                f"{self.line_bytes}-byte line"
            )

    @property
    def lines(self) -> int:
        return self.capacity_bytes // self.line_bytes


class StoreEntry(NamedTuple):
    state: CollisionState
    # None for points that collided and therefore never became tree nodes
    node: Optional[int]
    point: tuple

    @property
    def node_t(self) -> float:
        return self.point[2]


class StoreLine:
    __slots__ = ("tag", "entries", "last_ref")

    def __init__(self, tag: int, entries_per_line: int, stamp: int):
        self.tag = tag
        self.entries: deque[StoreEntry] = deque(maxlen=entries_per_line)
        self.last_ref = stamp


class MortonStore:
    def __init__(self, config: StoreConfig | None = None, counter: OpCounter | None = None):
        self.config = config if config is not None else StoreConfig()
        self.counter = counter if counter is not None else OpCounter(CostModel(), self.config.backend)
        self._lines: OrderedDict[int, StoreLine] = OrderedDict()
        self._capacity = self.config.lines
        self._epl = self.config.entries_per_line
        self._keyer = make_keyer(self.config.quant)
        self._closest = self.config.nn_policy == "closest"
        self._stamp = 0
        self._last = (None, 0)
        self.evictions = 0

    def __len__(self) -> int:
        return len(self._lines)

    @property
    def n_entries(self) -> int:
        return sum(len(line.entries) for line in self._lines.values())

    def lines(self):
        return list(self._lines.values())

    def key(self, p) -> int:
        # X_new is looked up and then updated; encode it once
        last_p, last_key = self._last
        if last_p is p:
            return last_key
        k = self._keyer(p)
        self._last = (p, k)
        return k

    def _touch(self, line: StoreLine) -> None:
        self._stamp += 1
        line.last_ref = self._stamp
        self._lines.move_to_end(line.tag)

    def record_cost(self, op_kind: str) -> None:
        self.counter.record(op_kind)

    def morton_nn(self, p) -> Optional[int]:
        """A stored tree node in ``p``'s cell that is strictly earlier than ``p``, or None.

        Under the ``closest`` policy the nearest such entry of the line wins
        (latest entry on ties); under ``recent`` the latest one does.
        """
        self.record_cost("store_lookup")
        line = self._lines.get(self.key(p))
        if line is None:
            return None
        self._touch(line)
        x, y, t = p[0], p[1], p[2]
        if self._closest:
            w_t = self.config.w_t
            best = None
            best_d = math.inf
            for e in line.entries:
                q = e.point
                if e.node is not None and q[2] < t:
                    dx, dy, dt = q[0] - x, q[1] - y, q[2] - t
                    d = dx * dx + dy * dy + w_t * dt * dt
                    if d <= best_d:
                        best_d = d
                        best = e.node
            return best
        for e in reversed(line.entries):
            if e.node is not None and e.point[2] < t:
                return e.node
        return None

    def morton_col(self, p) -> CollisionState:
        """MISS without a matching line; COLLISION if any entry of the line collided."""
        self.record_cost("store_lookup")
        line = self._lines.get(self.key(p))
        if line is None:
            return MISS
        self._touch(line)
        for e in line.entries:
            if e.state is COLLISION:
                return COLLISION
        return NO_COLLISION

    def morton_update(self, p, state: CollisionState, node: Optional[int]) -> None:
        if state is MISS:
            raise ValueError("cannot store a MISS state")
        self.record_cost("store_update")
        if not self._capacity:
            return
        tag = self.key(p)
        line = self._lines.get(tag)
        if line is None:
            if len(self._lines) >= self._capacity:
                self._lines.popitem(last=False)
                self.evictions += 1
            line = StoreLine(tag, self._epl, 0)
            self._lines[tag] = line
        line.entries.append(StoreEntry(state, node, (p[0], p[1], p[2])))
        self._touch(line)
