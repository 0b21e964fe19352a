"""Tree/graph planner family sharing one deterministic iteration skeleton."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .base import (AnytimeTrace, EdgeCache, PlannerParams, PlannerResult,
                   TreeRoadmap, dump_roadmap)
from .instrument import ViolationReport, audit_pair, run_instrumented
from .lazy import LazyLbtRrtPlanner
from .lbt import LbtRrtPlanner
from .rrt import RrgPlanner, RrtPlanner, RrtStarPlanner, RrtThenRrtStarPlanner

PLANNER_CLASSES = {
    "rrt": RrtPlanner,
    "rrg": RrgPlanner,
    "rrt_star": RrtStarPlanner,
    "rrt_rrt_star": RrtThenRrtStarPlanner,
    "lbt_rrt": LbtRrtPlanner,
    "lazy_lbt_rrt": LazyLbtRrtPlanner,
}


def _run(cls, scenario, params, rng=None, clock=None) -> PlannerResult:
    return cls(scenario, params, rng=rng, clock=clock).run()


def run_rrt(scenario, params, rng=None, clock=None) -> PlannerResult:
    return _run(RrtPlanner, scenario, params, rng, clock)


def run_rrg(scenario, params, rng=None, clock=None) -> PlannerResult:
    return _run(RrgPlanner, scenario, params, rng, clock)


def run_rrt_star(scenario, params, rng=None, clock=None) -> PlannerResult:
    return _run(RrtStarPlanner, scenario, params, rng, clock)


def run_lbt_rrt(scenario, params, rng=None, clock=None) -> PlannerResult:
    return _run(LbtRrtPlanner, scenario, params, rng, clock)


def run_lazy_lbt_rrt(scenario, params, rng=None, clock=None) -> PlannerResult:
    return _run(LazyLbtRrtPlanner, scenario, params, rng, clock)


def run_planner(name: str, scenario, params, rng=None, clock=None, **kwargs) -> PlannerResult:
    try:
        cls = PLANNER_CLASSES[name]
    except KeyError:
        raise ValueError(f"unknown planner {name!r}; choose from {sorted(PLANNER_CLASSES)}") from None
    return cls(scenario, params, rng=rng, clock=clock, **kwargs).run()


__all__ = [
    "AnytimeTrace", "EdgeCache", "PlannerParams", "PlannerResult", "TreeRoadmap",
    "ViolationReport", "audit_pair", "run_instrumented", "dump_roadmap",
    "RrtPlanner", "RrgPlanner", "RrtStarPlanner", "RrtThenRrtStarPlanner",
    "LbtRrtPlanner", "LazyLbtRrtPlanner", "PLANNER_CLASSES",
    "run_rrt", "run_rrg", "run_rrt_star", "run_lbt_rrt", "run_lazy_lbt_rrt",
    "run_planner",
]
