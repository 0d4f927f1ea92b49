"""Operation-count cost model standing in for dynamic-instruction profiling."""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, fields
from importlib import resources


class Backend(enum.Enum):
    SOFTWARE = "software"
    HARDWARE = "hardware"


# counter categories, in CSV/report order
CATEGORIES = (
    "sample",
    "steer",
    "nn_visit",
    "tree_insert_visit",
    "collision_check",
    "store_lookup",
    "store_update",
)
STORE_CATEGORIES = ("store_lookup", "store_update")


@dataclass(frozen=True)
class CostModel:
    """Operations charged per counted event.

    Cycles are ``ops * cpi`` for everything except hardware store operations,
    which cost one operation and ``store_hw_latency`` cycles each.
    """

    sample: float = 10
    steer: float = 20
    nn_visit: float = 12
    tree_insert_visit: float = 0
    collision_check: float = 10
    store_sw_op: float = 40
    store_hw_op: float = 1
    store_hw_latency: float = 2
    cpi: float = 1.0

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"cost {f.name} must be >= 0")
        if self.store_hw_op != 1:
            raise ValueError("a hardware store operation is a single instruction")

    @classmethod
    def default(cls) -> "CostModel":
        text = resources.files("mortonrrt").joinpath("data/default_costs.json").read_text()
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_dict(cls, d: dict) -> "CostModel":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown cost fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path: str) -> "CostModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)

    def unit_ops(self, category: str, backend: Backend) -> float:
        if category in STORE_CATEGORIES:
            return self.store_hw_op if backend is Backend.HARDWARE else self.store_sw_op
        return getattr(self, category)

    def unit_cycles(self, category: str, backend: Backend) -> float:
        if category in STORE_CATEGORIES and backend is Backend.HARDWARE:
            return self.store_hw_latency
        return self.unit_ops(category, backend) * self.cpi


class OpCounter:
    """Per-category event counts plus the cost model and backend that price them."""

    def __init__(self, costs: CostModel | None = None, backend: Backend = Backend.SOFTWARE):
        self.costs = costs if costs is not None else CostModel()
        self.backend = backend
        self.counts = dict.fromkeys(CATEGORIES, 0)

    def record(self, category: str, n: int = 1) -> None:
        self.counts[category] += n

    def ops_by_category(self) -> dict[str, float]:
        return {c: n * self.costs.unit_ops(c, self.backend) for c, n in self.counts.items()}

    @property
    def modeled_ops(self) -> float:
        return sum(self.ops_by_category().values())

    @property
    def modeled_cycles(self) -> float:
        return sum(n * self.costs.unit_cycles(c, self.backend) for c, n in self.counts.items())

    @property
    def store_ops(self) -> float:
        return sum(v for c, v in self.ops_by_category().items() if c in STORE_CATEGORIES)
