"""Bundled benchmark scenarios and their generation.

Four planar scenarios ship as package data, each with a best-known cost
computed offline by the fine-grid octile Dijkstra oracle (the stored value's
provenance is recorded in the file's meta block):

* ``spiral_maze``: point robot winding through a rectangular spiral.
* ``alternating_gaps``: three barriers, each with a wide gap on alternating
  sides and a staggered narrow gap near the middle; greedy wide-gap routes
  are far longer than the narrow-gap route.
* ``corridors``: disc robot; a short narrow corridor and a long wide one
  connect start and goal.
* ``home``: point robot; a cheap detour over the top versus a much shorter
  route through a tight slit.

Run ``python -m nearplan.bench.scenarios <outdir>`` to regenerate the data
files (slow: the oracle runs at full resolution).
"""

from __future__ import annotations

import importlib.resources
import json
import sys
from pathlib import Path

import numpy as np

from ..cspace import (GoalRegion, RobotModel, Scenario, euclidean_space,
                      scenario_from_dict, scenario_to_dict)
from .oracle import grid_cost

ORACLE_RESOLUTION = 480


def rect(x0: float, y0: float, x1: float, y1: float) -> np.ndarray:
    """Axis-aligned rectangle as a counterclockwise polygon."""
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)


def build_spiral_maze() -> Scenario:
    walls = [
        rect(2.0, 2.0, 2.4, 10.0),   # left ring wall; spiral mouth at the bottom
        rect(2.4, 2.0, 8.0, 2.4),    # bottom ring wall
        rect(7.6, 2.4, 8.0, 8.0),    # right ring wall; gap at the top
        rect(4.0, 7.6, 7.6, 8.0),    # top ring wall; gap at the left
        rect(4.0, 3.6, 4.4, 7.6),    # inner wall: descend between the rings, exit south
    ]
    return Scenario(
        name="spiral_maze",
        space=euclidean_space([[0, 10], [0, 10]]),
        robot=RobotModel("point"),
        obstacles=walls,
        start=np.array([1.0, 1.0]),
        goal=GoalRegion(np.array([5.5, 3.0]), 0.45),
    )


#: rectangles that fill the narrow gaps, for wide-route oracle queries
GAPS_NARROW_FILLERS = [
    rect(2.1, 4.0, 2.9, 4.5),
    rect(4.6, 6.2, 5.4, 6.7),
    rect(7.1, 4.0, 7.9, 4.5),
]


def build_alternating_gaps() -> Scenario:
    """Three thick barriers with wide gaps on alternating sides and narrow
    gaps staggered so the taut narrow route is made of horizontal and
    exactly-45-degree segments (which the octile oracle represents with
    negligible error)."""
    walls = [
        # barrier 1: narrow gap y in [4.0, 4.5], wide gap at the top
        rect(2.1, 0.0, 2.9, 4.0),
        rect(2.1, 4.5, 2.9, 7.8),
        # barrier 2: narrow gap y in [6.2, 6.7], wide gap at the bottom
        rect(4.6, 2.2, 5.4, 6.2),
        rect(4.6, 6.7, 5.4, 10.0),
        # barrier 3: narrow gap y in [4.0, 4.5], wide gap at the top
        rect(7.1, 0.0, 7.9, 4.0),
        rect(7.1, 4.5, 7.9, 7.8),
    ]
    return Scenario(
        name="alternating_gaps",
        space=euclidean_space([[0, 10], [0, 10]]),
        robot=RobotModel("point"),
        obstacles=walls,
        start=np.array([0.8, 4.4]),
        goal=GoalRegion(np.array([9.2, 4.4]), 0.4),
    )


CORRIDORS_NARROW_FILLER = [rect(1.5, 1.55, 8.5, 2.45)]


def build_corridors() -> Scenario:
    """Disc robot, radius 0.35.  The direct corridor is 0.9 wide (0.2 of
    clearance for the disc center), so chaining samples through it takes
    many more of them than the cluttered-but-wide detour along the top."""
    obstacles = [
        rect(1.5, 0.0, 8.5, 1.55),    # below the narrow corridor
        rect(1.5, 2.45, 8.5, 6.8),    # slab between the corridors
        # clutter inside the wide corridor
        rect(2.3, 7.9, 2.8, 8.4),
        rect(3.8, 8.8, 4.3, 9.3),
        rect(5.3, 7.3, 5.8, 7.8),
        rect(6.8, 8.5, 7.3, 9.0),
        rect(4.6, 9.4, 5.1, 9.9),
    ]
    return Scenario(
        name="corridors",
        space=euclidean_space([[0, 10], [0, 10]]),
        robot=RobotModel("disc", radius=0.35),
        obstacles=obstacles,
        start=np.array([0.8, 2.0]),
        goal=GoalRegion(np.array([9.2, 2.0]), 0.4),
    )


HOME_SLIT_FILLER = [rect(4.8, 1.2, 5.2, 1.75)]


def build_home() -> Scenario:
    obstacles = [
        rect(4.8, 0.0, 5.2, 1.2),     # wall below the slit
        rect(4.8, 1.75, 5.2, 9.0),    # wall above the slit; open above y = 9
        rect(2.0, 6.0, 3.4, 7.4),     # furniture
        rect(6.6, 5.6, 8.0, 7.0),
    ]
    return Scenario(
        name="home",
        space=euclidean_space([[0, 10], [0, 10]]),
        robot=RobotModel("point"),
        obstacles=obstacles,
        start=np.array([1.0, 1.5]),
        goal=GoalRegion(np.array([9.0, 1.5]), 0.4),
    )


BUILDERS = {
    "spiral_maze": (build_spiral_maze, []),
    "alternating_gaps": (build_alternating_gaps, GAPS_NARROW_FILLERS),
    "corridors": (build_corridors, CORRIDORS_NARROW_FILLER),
    "home": (build_home, HOME_SLIT_FILLER),
}


def data_dir():
    return importlib.resources.files("nearplan.bench") / "data"


def bundled_scenarios() -> list[Scenario]:
    """The shipped scenarios, best-known costs included."""
    out = []
    for name in sorted(BUILDERS):
        with (data_dir() / f"{name}.json").open("r", encoding="utf-8") as fh:
            out.append(scenario_from_dict(json.load(fh)))
    return out


def bundled_scenario(name: str) -> Scenario:
    if name not in BUILDERS:
        raise KeyError(f"unknown bundled scenario {name!r}; have {sorted(BUILDERS)}")
    with (data_dir() / f"{name}.json").open("r", encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


def regenerate(out_dir, resolution: int = ORACLE_RESOLUTION) -> list[Path]:
    """Rebuild the data files, rerunning the oracle at full resolution."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (builder, fillers) in sorted(BUILDERS.items()):
        sc = builder()
        best = grid_cost(sc, resolution)
        doc = scenario_to_dict(sc)
        doc["best_known"] = best
        meta = {
            "best_known_method": f"grid_dijkstra_octile_{resolution}x{resolution}",
        }
        if fillers:
            wide = grid_cost(sc, resolution, extra_obstacles=fillers)
            meta["wide_route_cost"] = wide
            meta["wide_route_method"] = (
                f"grid_dijkstra_octile_{resolution}x{resolution} with narrow passages filled")
            meta["narrow_fillers"] = [f.tolist() for f in fillers]
        doc["meta"] = meta
        path = out_dir / f"{name}.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        written.append(path)
    return written


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else str(data_dir())
    for p in regenerate(target):
        print(p)
