"""Worlds with linearly moving disc obstacles, the synthetic generator, and the JSON file format."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import IO, NamedTuple

DEFAULT_RADIUS = 3.0
DEFAULT_GOAL_RADIUS = 2.0
FORMAT_VERSION = 1


class ScenarioError(ValueError):
    """Raised for malformed or invalid scenario files and values."""


class SpaceTimePoint(NamedTuple):
    x: float
    y: float
    t: float


@dataclass(frozen=True)
class ObstacleTrack:
    start_pos: tuple[float, float]
    end_pos: tuple[float, float]
    radius: float = DEFAULT_RADIUS

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ScenarioError(f"obstacle radius must be > 0, got {self.radius!r}")


@dataclass(frozen=True)
class Scenario:
    edge_length: float
    timesteps: int
    obstacles: tuple[ObstacleTrack, ...] = ()
    start: tuple[float, float] = (0.0, 0.0)
    goal: tuple[float, float] | None = None
    goal_radius: float = DEFAULT_GOAL_RADIUS

    def __post_init__(self) -> None:
        if not self.edge_length > 0:
            raise ScenarioError(f"edge_length must be > 0, got {self.edge_length!r}")
        if int(self.timesteps) != self.timesteps or self.timesteps < 1:
            raise ScenarioError(f"timesteps must be an integer >= 1, got {self.timesteps!r}")
        if not self.goal_radius > 0:
            raise ScenarioError(f"goal_radius must be > 0, got {self.goal_radius!r}")
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if self.goal is None:
            object.__setattr__(self, "goal", (float(self.edge_length), float(self.edge_length)))
        for name in ("start", "goal"):
            if not self.in_square(getattr(self, name)):
                raise ScenarioError(f"{name} {getattr(self, name)!r} lies outside the map")
        for i, ob in enumerate(self.obstacles):
            for name in ("start_pos", "end_pos"):
                if not self.in_square(getattr(ob, name)):
                    raise ScenarioError(f"obstacles[{i}].{name} lies outside the map")

    @property
    def n_obstacles(self) -> int:
        return len(self.obstacles)

    def in_square(self, xy) -> bool:
        return 0.0 <= xy[0] <= self.edge_length and 0.0 <= xy[1] <= self.edge_length

    def contains(self, p: SpaceTimePoint) -> bool:
        return self.in_square(p) and 0.0 <= p[2] <= self.timesteps


def obstacle_position_at(track: ObstacleTrack, t: float, timesteps: int) -> tuple[float, float]:
    """Position of ``track`` at (possibly fractional) time ``t`` in ``[0, timesteps]``."""
    if not 0.0 <= t <= timesteps:
        raise ValueError(f"t={t!r} outside [0, {timesteps}]")
    f = t / timesteps
    (x0, y0), (x1, y1) = track.start_pos, track.end_pos
    return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))


def generate_synthetic(
    edge_length: float,
    timesteps: int,
    n_obstacles: int,
    seed: int,
    radius: float = DEFAULT_RADIUS,
    goal_radius: float = DEFAULT_GOAL_RADIUS,
) -> Scenario:
    """Square map from (0, 0) to (l, l) with obstacle endpoints drawn uniformly from the map."""
    if n_obstacles < 0:
        raise ValueError("n_obstacles must be >= 0")
    rng = random.Random(seed)
    l = float(edge_length)
    tracks = []
    for _ in range(n_obstacles):
        start = (rng.uniform(0.0, l), rng.uniform(0.0, l))
        end = (rng.uniform(0.0, l), rng.uniform(0.0, l))
        tracks.append(ObstacleTrack(start, end, radius))
    return Scenario(l, int(timesteps), tuple(tracks), (0.0, 0.0), (l, l), goal_radius)


# -- serialization ---------------------------------------------------------


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "format": FORMAT_VERSION,
        "edge_length": s.edge_length,
        "timesteps": s.timesteps,
        "start": list(s.start),
        "goal": list(s.goal),
        "goal_radius": s.goal_radius,
        "obstacles": [
            {"start_pos": list(o.start_pos), "end_pos": list(o.end_pos), "radius": o.radius}
            for o in s.obstacles
        ],
    }


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2, sort_keys=True) + "\n"


def save_scenario(s: Scenario, sink: IO[str] | str) -> None:
    text = dumps_scenario(s)
    if isinstance(sink, str):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sink.write(text)


def _require(d: dict, key: str, where: str = ""):
    if not isinstance(d, dict) or key not in d:
        raise ScenarioError(f"missing field {where}{key!r}")
    return d[key]


def _number(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ScenarioError(f"field {name!r} must be a finite number, got {v!r}")
    return float(v)


def _pair(v, name: str) -> tuple[float, float]:
    if not isinstance(v, list) or len(v) != 2:
        raise ScenarioError(f"field {name!r} must be a 2-element list")
    return (_number(v[0], name), _number(v[1], name))


def scenario_from_dict(d: dict) -> Scenario:
    timesteps = _require(d, "timesteps")
    if isinstance(timesteps, bool) or not isinstance(timesteps, int):
        raise ScenarioError(f"field 'timesteps' must be an integer, got {timesteps!r}")
    obstacles_raw = _require(d, "obstacles")
    if not isinstance(obstacles_raw, list):
        raise ScenarioError("field 'obstacles' must be a list")
    tracks = []
    for i, o in enumerate(obstacles_raw):
        where = f"obstacles[{i}]."
        radius = _number(_require(o, "radius", where), where + "radius")
        if radius <= 0:
            raise ScenarioError(f"field {where}radius must be > 0, got {radius!r}")
        tracks.append(
            ObstacleTrack(
                _pair(_require(o, "start_pos", where), where + "start_pos"),
                _pair(_require(o, "end_pos", where), where + "end_pos"),
                radius,
            )
        )
    return Scenario(
        edge_length=_number(_require(d, "edge_length"), "edge_length"),
        timesteps=timesteps,
        obstacles=tuple(tracks),
        start=_pair(_require(d, "start"), "start"),
        goal=_pair(_require(d, "goal"), "goal"),
        goal_radius=_number(_require(d, "goal_radius"), "goal_radius"),
    )


def loads_scenario(text: str) -> Scenario:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not a valid scenario document: {exc}") from exc
    return scenario_from_dict(d)


def load_scenario(source: IO[str] | str) -> Scenario:
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return loads_scenario(fh.read())
    return loads_scenario(source.read())
