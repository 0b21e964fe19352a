"""Sampling-based motion planning with asymptotically near-optimal planners.

The package bundles the classic tree planners (RRT, RRG, RRT*), the
lower-bound-tree family that interpolates between them under a (1 + eps)
approximation factor, batch planners built on fast-marching expansion, path
shortcutting, and a benchmark harness with bundled planar scenarios.
"""

from .cspace import (CSpaceError, GoalRegion, NoFreeSpaceError, RobotModel,
                     Scenario, SpaceDefinition, collision_free_config,
                     collision_free_motion, distance, euclidean_space, in_goal,
                     interpolate, load_scenario, sample_free, save_scenario,
                     se2_space, steer)
from .dynsp import DynamicGraph, GraphError, LpaState, SsspState, dijkstra
from .fmt import connection_radius, default_gamma, run_afmt, run_fmt, run_lbt_afmt
from .nn import NeighborIndex, rrg_neighbor_count
from .planners import (PlannerParams, PlannerResult, run_instrumented,
                       run_lazy_lbt_rrt, run_lbt_rrt, run_planner, run_rrg,
                       run_rrt, run_rrt_star)
from .postprocess import path_cost, shortcut

__version__ = "0.1.0"

__all__ = [
    "CSpaceError", "GoalRegion", "NoFreeSpaceError", "RobotModel", "Scenario",
    "SpaceDefinition", "collision_free_config", "collision_free_motion",
    "distance", "euclidean_space", "in_goal", "interpolate", "load_scenario",
    "sample_free", "save_scenario", "se2_space", "steer",
    "DynamicGraph", "GraphError", "LpaState", "SsspState", "dijkstra",
    "connection_radius", "default_gamma", "run_afmt", "run_fmt", "run_lbt_afmt",
    "NeighborIndex", "rrg_neighbor_count",
    "PlannerParams", "PlannerResult", "run_instrumented", "run_lazy_lbt_rrt",
    "run_lbt_rrt", "run_planner", "run_rrg", "run_rrt", "run_rrt_star",
    "path_cost", "shortcut",
    "__version__",
]
