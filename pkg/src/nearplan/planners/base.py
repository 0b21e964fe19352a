"""Shared machinery for the tree/graph planner family.

Every planner runs the same iteration skeleton: draw a sample (goal-biased),
find the nearest roadmap vertex, steer toward the sample, certify the
resulting edge with the local planner, and on success add the new vertex.
Planners differ only in the connections they add afterwards, so identical
(scenario, params, seed) triples produce identical vertex sets across the
whole family.

Local-planner results are cached per unordered vertex-id pair; the
``lp_calls`` counter counts cache misses only, i.e. each pair is charged at
most once per run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .. import cspace
from ..cspace import CheckCounters, Scenario, distance, in_goal
from ..nn import NeighborIndex

INF = float("inf")


@dataclass
class PlannerParams:
    """Knobs shared by the whole planner family.

    eta: steer truncation length.
    goal_bias: probability of drawing the sample from the goal region.
    epsilon: approximation slack for the lower-bound-tree variants.
    iterations / time_budget / stop_on_first_solution: stop conditions; any
    combination may be active, the first one reached wins.
    delta: motion-check resolution (None picks the scenario default).
    """

    eta: float
    goal_bias: float = 0.05
    epsilon: float = 0.0
    iterations: Optional[int] = None
    time_budget: Optional[float] = None
    stop_on_first_solution: bool = False
    seed: int = 0
    delta: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not 0.0 <= self.goal_bias < 1.0:
            raise ValueError("goal_bias must lie in [0, 1)")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.iterations is None and self.time_budget is None and not self.stop_on_first_solution:
            raise ValueError("at least one stop condition is required")


@dataclass
class AnytimeTrace:
    """Per-run record: best-cost events plus primitive-operation counters."""

    events: list[tuple[float, int, float]] = field(default_factory=list)
    samples: int = 0
    lp_calls: int = 0
    cc_calls: int = 0
    delta_hat: int = 0
    vertices: int = 0
    edges: int = 0
    iterations: int = 0
    elapsed: float = 0.0
    status: str = "no_solution"

    @property
    def best_cost(self) -> float:
        return self.events[-1][2] if self.events else INF


class EdgeCache:
    """Free/Blocked verdicts per unordered vertex-id pair.

    Entries never change; re-submitting a cached pair to the local planner
    is a bug, so store() rejects conflicting updates.
    """

    def __init__(self) -> None:
        self._map: dict[tuple[int, int], bool] = {}

    @staticmethod
    def _key(u: int, v: int) -> tuple[int, int]:
        return (u, v) if u < v else (v, u)

    def lookup(self, u: int, v: int) -> Optional[bool]:
        return self._map.get(self._key(u, v))

    def store(self, u: int, v: int, free: bool) -> None:
        key = self._key(u, v)
        old = self._map.get(key)
        if old is not None and old != free:
            raise RuntimeError(f"conflicting certification for pair {key}")
        self._map[key] = free

    def __len__(self) -> int:
        return len(self._map)


class TreeRoadmap:
    """Rooted tree with cost-to-come bookkeeping and subtree refresh."""

    def __init__(self) -> None:
        self.parent: list[int] = [-1]
        self.edge_w: list[float] = [0.0]
        self.cost: list[float] = [0.0]
        self.children: list[set[int]] = [set()]

    def __len__(self) -> int:
        return len(self.parent)

    def add_vertex(self, parent: int, w: float) -> int:
        vid = len(self.parent)
        self.parent.append(parent)
        self.edge_w.append(w)
        self.cost.append(self.cost[parent] + w)
        self.children.append(set())
        self.children[parent].add(vid)
        return vid

    def reparent(self, v: int, new_parent: int, w: float) -> None:
        """Re-hang v under new_parent and refresh costs below v."""
        old = self.parent[v]
        self.children[old].discard(v)
        self.parent[v] = new_parent
        self.edge_w[v] = w
        self.children[new_parent].add(v)
        self.cost[v] = self.cost[new_parent] + w
        stack = list(self.children[v])
        while stack:
            x = stack.pop()
            self.cost[x] = self.cost[self.parent[x]] + self.edge_w[x]
            stack.extend(self.children[x])

    def path_ids(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] != -1:
            out.append(self.parent[out[-1]])
        out.reverse()
        return out


@dataclass
class PlannerResult:
    """Roadmap(s), best solution and trace for one seeded run."""

    planner: str
    scenario_name: str
    configs: np.ndarray
    parent: Optional[list[int]]
    cost: Optional[list[float]]
    graph_edges: Optional[list[tuple[int, int, float]]]
    goal_vids: list[int]
    best_cost: float
    path: Optional[np.ndarray]
    trace: AnytimeTrace
    extra: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.best_cost < INF


def dump_roadmap(result: PlannerResult) -> str:
    """Debug dump: one ``id coords... cost parent`` line per vertex followed
    by one ``u v w`` line per edge."""
    lines = []
    n = result.configs.shape[0]
    for vid in range(n):
        coords = " ".join(repr(float(c)) for c in result.configs[vid])
        cost = result.cost[vid] if result.cost is not None else ""
        par = result.parent[vid] if result.parent is not None else ""
        lines.append(f"{vid} {coords} {cost!r} {par}")
    if result.graph_edges is not None:
        for u, v, w in result.graph_edges:
            lines.append(f"{u} {v} {w!r}")
    elif result.parent is not None:
        for vid in range(1, n):
            p = result.parent[vid]
            if p >= 0:
                w = result.cost[vid] - result.cost[p] if result.cost else 0.0
                lines.append(f"{p} {vid} {w!r}")
    return "\n".join(lines)


class TreePlannerBase:
    """Iteration skeleton; subclasses add their connection strategy."""

    name = "base"

    def __init__(self, scenario: Scenario, params: PlannerParams,
                 rng: Optional[np.random.Generator] = None,
                 clock: Optional[Callable[[], float]] = None,
                 shared_geometry: Optional[dict] = None):
        self.scenario = scenario
        self.params = params
        self.space = scenario.space
        self.rng = rng if rng is not None else np.random.default_rng(params.seed)
        self.clock = clock if clock is not None else time.perf_counter
        self.delta = params.delta if params.delta is not None else scenario.default_delta()
        self.counters = CheckCounters()
        self.cache = EdgeCache()
        # optional memo shared across lockstep same-seed planners: identical
        # queries are computed once, while each planner's own counters still
        # charge it for every local-planner call it issues
        self.geometry = shared_geometry
        self.index = NeighborIndex(scenario.space)
        self.lp_calls = 0
        self.samples = 0
        self.iteration = 0
        self.goal_vids: list[int] = []
        self.trace = AnytimeTrace()
        self._t0: Optional[float] = None
        self._best = INF
        root = self.index.insert(scenario.start)
        if in_goal(scenario, scenario.start):
            self.goal_vids.append(root)
        self._init_structures(root)

    # subclass hooks ------------------------------------------------------

    def _init_structures(self, root: int) -> None:
        raise NotImplementedError

    def _on_vertex(self, vid: int, cfg: np.ndarray, nearest_id: int, w: float) -> None:
        raise NotImplementedError

    def _best_cost(self) -> float:
        raise NotImplementedError

    def _edge_count(self) -> int:
        raise NotImplementedError

    def _path_ids(self, goal_vid: int) -> list[int]:
        raise NotImplementedError

    def _delta_hat(self) -> int:
        return 0

    # local planner ---------------------------------------------------------

    def _motion_free(self, a: np.ndarray, b: np.ndarray) -> bool:
        self.lp_calls += 1
        geo = self.geometry
        if geo is None:
            return cspace.collision_free_motion(self.scenario, a, b, self.delta, self.counters)
        key = (a.tobytes(), b.tobytes()) if a.tobytes() < b.tobytes() else (b.tobytes(), a.tobytes())
        hit = geo.get(key)
        if hit is None:
            hit = cspace.collision_free_motion(self.scenario, a, b, self.delta, self.counters)
            geo[key] = hit
        return hit

    def _certify(self, u: int, v: int) -> bool:
        """Cache-aware local planner on a vertex pair."""
        hit = self.cache.lookup(u, v)
        if hit is not None:
            return hit
        free = self._motion_free(self.index.config(u), self.index.config(v))
        self.cache.store(u, v, free)
        return free

    def _certify_many(self, others: list[int], vid: int, cfg: np.ndarray) -> list[bool]:
        """Batch form of _certify against one shared endpoint.  Endpoints are
        roadmap vertices, hence known collision-free."""
        results: list[Optional[bool]] = [self.cache.lookup(nb, vid) for nb in others]
        todo = [i for i, r in enumerate(results) if r is None]
        if todo:
            self.lp_calls += len(todo)
            geo = self.geometry
            fresh = []
            if geo is not None:
                vb = cfg.tobytes()
                keys = []
                for i in todo:
                    ob = self.index.config(others[i]).tobytes()
                    keys.append((ob, vb) if ob < vb else (vb, ob))
                fresh = [i for i, k in zip(todo, keys) if k not in geo]
                for i, k in zip(todo, keys):
                    if k in geo:
                        results[i] = geo[k]
            else:
                fresh = todo
            if fresh:
                targets = self.index.coords()[[others[i] for i in fresh]]
                free = cspace.collision_free_motions_from(
                    self.scenario, cfg, targets, self.delta, self.counters)
                for i, f in zip(fresh, free):
                    results[i] = bool(f)
                    if geo is not None:
                        ob = self.index.config(others[i]).tobytes()
                        vb = cfg.tobytes()
                        geo[(ob, vb) if ob < vb else (vb, ob)] = bool(f)
            for i in todo:
                self.cache.store(others[i], vid, results[i])
        return results  # type: ignore[return-value]

    # skeleton ----------------------------------------------------------------

    def step(self) -> Optional[int]:
        """One iteration; returns the new vertex id, or None if rejected."""
        if self._t0 is None:
            self._t0 = self.clock()
        self.iteration += 1
        rng = self.rng
        if rng.random() < self.params.goal_bias:
            x_rand = cspace.sample_in_goal(self.scenario, rng)
        else:
            x_rand = cspace.sample_free(self.scenario, rng, self.counters)
        self.samples += 1
        nearest_id = self.index.nearest(x_rand)
        near_cfg = self.index.config(nearest_id)
        d = distance(self.space, near_cfg, x_rand)
        if d == 0.0:
            self._note_progress()
            return None
        if d <= self.params.eta:
            x_new = cspace.normalize(self.space, x_rand)
        else:
            x_new = cspace.interpolate(self.space, near_cfg, x_rand, self.params.eta / d)
        w = distance(self.space, near_cfg, x_new)
        if w == 0.0:
            self._note_progress()
            return None
        if not self._motion_free(near_cfg, x_new):
            self._note_progress()
            return None
        vid = self.index.insert(x_new)
        self.cache.store(nearest_id, vid, True)
        if in_goal(self.scenario, x_new):
            self.goal_vids.append(vid)
        self._on_vertex(vid, x_new, nearest_id, w)
        self._note_progress()
        return vid

    def _note_progress(self) -> None:
        best = self._best_cost()
        if best < self._best:
            self._best = best
            self.trace.events.append((self.clock() - self._t0, self.iteration, best))

    def run(self) -> PlannerResult:
        if self._t0 is None:
            self._t0 = self.clock()
        p = self.params
        while True:
            if p.iterations is not None and self.iteration >= p.iterations:
                break
            if p.time_budget is not None and self.clock() - self._t0 >= p.time_budget:
                break
            if p.stop_on_first_solution and self._best < INF:
                break
            self.step()
        return self.result()

    def result(self) -> PlannerResult:
        t = self.trace
        t.samples = self.samples
        t.lp_calls = self.lp_calls
        t.cc_calls = self.counters.config_checks
        t.delta_hat = self._delta_hat()
        t.vertices = len(self.index)
        t.edges = self._edge_count()
        t.iterations = self.iteration
        t.elapsed = (self.clock() - self._t0) if self._t0 is not None else 0.0
        t.status = "solved" if self._best < INF else "no_solution"
        path = None
        if self._best < INF:
            ids = self._path_ids(self._best_goal())
            pts = [self.index.config(i) for i in ids]
            dedup = [pts[0]]
            for q in pts[1:]:
                if distance(self.space, dedup[-1], q) > 0.0:
                    dedup.append(q)
            path = np.array(dedup)
        return self._build_result(path)

    def _best_goal(self) -> int:
        raise NotImplementedError

    def _build_result(self, path: Optional[np.ndarray]) -> PlannerResult:
        raise NotImplementedError
