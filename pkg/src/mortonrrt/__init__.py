"""Space-time RRT with Morton-code memoization of nearest-neighbor and collision queries."""

from mortonrrt.scenario import ObstacleTrack, Scenario, SpaceTimePoint, generate_synthetic
from mortonrrt.planner import PlannerConfig, PlanResult, PlanStats, Variant, plan
from mortonrrt.cost import Backend, CostModel
from mortonrrt.memostore import MortonStore, StoreConfig

__all__ = [
    "Backend",
    "CostModel",
    "MortonStore",
    "ObstacleTrack",
    "PlanResult",
    "PlanStats",
    "PlannerConfig",
    "Scenario",
    "SpaceTimePoint",
    "StoreConfig",
    "Variant",
    "generate_synthetic",
    "plan",
]
