"""Path shortcutting and path-quality metrics.

Shortcutting draws two parameters uniformly by arc length, interpolates the
two configurations, and splices in the connecting segment whenever it is
collision-free and strictly cheaper.  Long segments therefore receive
proportionally more shortcut attempts.  Cost never increases and the output
stays feasible.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .cspace import (CheckCounters, Scenario, collision_free_motion, distance,
                     interpolate)

#: minimum cost decrease for a splice to be accepted
MIN_IMPROVEMENT = 1e-12


def path_cost(space, waypoints) -> float:
    """Sum of metric segment lengths; zero for a single waypoint."""
    pts = [np.asarray(q, dtype=float) for q in waypoints]
    if not pts:
        raise ValueError("a path needs at least one waypoint")
    return sum(distance(space, pts[i], pts[i + 1]) for i in range(len(pts) - 1))


def _locate(space, pts, lengths, s: float) -> tuple[int, np.ndarray]:
    """Segment index and interpolated configuration at arc length s."""
    for i, seg in enumerate(lengths):
        if s <= seg or i == len(lengths) - 1:
            t = 0.0 if seg == 0.0 else min(1.0, s / seg)
            return i, interpolate(space, pts[i], pts[i + 1], t)
        s -= seg
    raise AssertionError("unreachable")


def shortcut(scenario: Scenario, waypoints, iterations: int,
             rng: np.random.Generator, delta: Optional[float] = None,
             counters: Optional[CheckCounters] = None) -> list[np.ndarray]:
    """Run the given number of shortcut rounds over a feasible path.

    Each round consumes exactly two uniform draws, so the output is a
    deterministic function of (path, iterations, seed).
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    space = scenario.space
    pts = [np.asarray(q, dtype=float) for q in waypoints]
    if len(pts) == 1:
        return pts
    for _ in range(iterations):
        u = rng.random(2)
        lengths = [distance(space, pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
        total = sum(lengths)
        if total == 0.0:
            continue
        s1, s2 = sorted(u * total)
        i1, q1 = _locate(space, pts, lengths, s1)
        i2, q2 = _locate(space, pts, lengths, s2)
        if i2 < i1:
            continue
        removed = (s2 - s1)
        gain = removed - distance(space, q1, q2)
        if gain <= MIN_IMPROVEMENT:
            continue
        if not collision_free_motion(scenario, q1, q2, delta, counters):
            continue
        spliced = pts[: i1 + 1] + [q1, q2] + pts[i2 + 1:]
        pts = [spliced[0]]
        for q in spliced[1:]:
            if distance(space, pts[-1], q) > 0.0:
                pts.append(q)
    return pts
