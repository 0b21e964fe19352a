"""RRT, RRG and RRT* over the shared iteration skeleton.

RRT adds only the steered nearest edge.  RRG additionally wires the new
vertex to its ceil(2e ln n) nearest neighbors in both directions, so its
roadmap is a graph; cost-to-come is maintained incrementally by the dynamic
shortest-path engine (the graph only ever gains edges).  RRT* keeps a tree
and rewires it through the same neighbor set, scanning candidate parents in
ascending potential-cost order so the first collision-free candidate is
optimal.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..cspace import distances_to
from ..dynsp import DynamicGraph, SsspState
from ..nn import rrg_neighbor_count
from .base import INF, PlannerResult, TreePlannerBase, TreeRoadmap


class RrtPlanner(TreePlannerBase):
    name = "rrt"

    def _init_structures(self, root: int) -> None:
        self.tree = TreeRoadmap()

    def _on_vertex(self, vid, cfg, nearest_id, w) -> None:
        self.tree.add_vertex(nearest_id, w)

    def _best_cost(self) -> float:
        if not self.goal_vids:
            return INF
        return min(self.tree.cost[v] for v in self.goal_vids)

    def _best_goal(self) -> int:
        return min(self.goal_vids, key=lambda v: (self.tree.cost[v], v))

    def _edge_count(self) -> int:
        return len(self.tree) - 1

    def _path_ids(self, goal_vid: int) -> list[int]:
        return self.tree.path_ids(goal_vid)

    def _build_result(self, path) -> PlannerResult:
        return PlannerResult(
            planner=self.name, scenario_name=self.scenario.name,
            configs=self.index.coords().copy(),
            parent=list(self.tree.parent), cost=list(self.tree.cost),
            graph_edges=None, goal_vids=list(self.goal_vids),
            best_cost=self._best, path=path, trace=self.trace)


class RrgPlanner(TreePlannerBase):
    name = "rrg"

    def _init_structures(self, root: int) -> None:
        self.graph = DynamicGraph(1)
        self.sssp = SsspState(self.graph, root)
        self.edge_log: list[tuple[int, int]] = []

    def _insert_pair(self, u: int, v: int, w: float) -> None:
        self.sssp.insert_edge(u, v, w)
        self.sssp.insert_edge(v, u, w)
        self.edge_log.append((u, v))
        self.edge_log.append((v, u))

    def _on_vertex(self, vid, cfg, nearest_id, w) -> None:
        self.graph.add_vertex()
        self._insert_pair(nearest_id, vid, w)
        k = rrg_neighbor_count(len(self.index))
        nbrs = self.index.k_nearest(cfg, k, exclude=vid)
        if not nbrs:
            return
        dists = distances_to(self.space, self.index.coords()[nbrs], cfg)
        cand = [(nb, float(dnb)) for nb, dnb in zip(nbrs, dists)
                if not self.graph.has_edge(nb, vid)]
        free = self._certify_many([nb for nb, _ in cand], vid, cfg)
        for (nb, dnb), ok in zip(cand, free):
            if ok:
                self._insert_pair(nb, vid, dnb)

    def _best_cost(self) -> float:
        if not self.goal_vids:
            return INF
        return min(self.sssp.cost(v) for v in self.goal_vids)

    def _best_goal(self) -> int:
        return min(self.goal_vids, key=lambda v: (self.sssp.cost(v), v))

    def _edge_count(self) -> int:
        return self.graph.num_edges

    def _delta_hat(self) -> int:
        return self.sssp.max_affected

    def _path_ids(self, goal_vid: int) -> list[int]:
        ids = [goal_vid]
        while True:
            p = self.sssp.parent(ids[-1])
            if p is None:
                break
            ids.append(p)
        ids.reverse()
        return ids

    def _build_result(self, path) -> PlannerResult:
        return PlannerResult(
            planner=self.name, scenario_name=self.scenario.name,
            configs=self.index.coords().copy(),
            parent=[p if p is not None else -1 for p in (self.sssp.parent(v) for v in range(len(self.index)))],
            cost=self.sssp.cost_list(),
            graph_edges=list(self.graph.edges()), goal_vids=list(self.goal_vids),
            best_cost=self._best, path=path, trace=self.trace)


class RrtStarPlanner(TreePlannerBase):
    name = "rrt_star"

    def _init_structures(self, root: int) -> None:
        self.tree = TreeRoadmap()

    def _rewire(self, vid: int, cfg: np.ndarray) -> None:
        tree = self.tree
        k = rrg_neighbor_count(len(self.index))
        nbrs = self.index.k_nearest(cfg, k, exclude=vid)
        if not nbrs:
            return
        dists = distances_to(self.space, self.index.coords()[nbrs], cfg)
        # pass 1: cheapest admissible parent for the new vertex; candidates in
        # ascending potential-cost order, so the first free one is optimal
        order = sorted(range(len(nbrs)), key=lambda i: (tree.cost[nbrs[i]] + dists[i], nbrs[i]))
        for i in order:
            pot = tree.cost[nbrs[i]] + dists[i]
            if pot >= tree.cost[vid]:
                break
            if self._certify(nbrs[i], vid):
                tree.reparent(vid, nbrs[i], float(dists[i]))
                break
        # pass 2: the new vertex as parent of each neighbor
        for nb, dnb in zip(nbrs, dists):
            if tree.cost[vid] + dnb < tree.cost[nb]:
                if self._certify(vid, nb):
                    tree.reparent(nb, vid, float(dnb))

    def _on_vertex(self, vid, cfg, nearest_id, w) -> None:
        self.tree.add_vertex(nearest_id, w)
        self._rewire(vid, cfg)

    def _best_cost(self) -> float:
        if not self.goal_vids:
            return INF
        return min(self.tree.cost[v] for v in self.goal_vids)

    def _best_goal(self) -> int:
        return min(self.goal_vids, key=lambda v: (self.tree.cost[v], v))

    def _edge_count(self) -> int:
        return len(self.tree) - 1

    def _path_ids(self, goal_vid: int) -> list[int]:
        return self.tree.path_ids(goal_vid)

    def _build_result(self, path) -> PlannerResult:
        return PlannerResult(
            planner=self.name, scenario_name=self.scenario.name,
            configs=self.index.coords().copy(),
            parent=list(self.tree.parent), cost=list(self.tree.cost),
            graph_edges=None, goal_vids=list(self.goal_vids),
            best_cost=self._best, path=path, trace=self.trace)


class RrtThenRrtStarPlanner(RrtStarPlanner):
    """Runs plain RRT until the first solution, then continues as RRT*.

    With reuse enabled (the default) the RRT tree seeds the RRT* phase;
    otherwise the roadmap is rebuilt from the root when the phase flips.
    """

    name = "rrt_rrt_star"

    def __init__(self, *args, reuse: bool = True, **kwargs):
        super().__init__(*args, **kwargs)
        self._star_mode = False
        self._reuse = reuse
        self._archived_cost = INF
        self._archived_path: Optional[np.ndarray] = None

    def _on_vertex(self, vid, cfg, nearest_id, w) -> None:
        self.tree.add_vertex(nearest_id, w)
        if self._star_mode:
            self._rewire(vid, cfg)

    def step(self):
        vid = super().step()
        if not self._star_mode and self._tree_best() < INF:
            self._star_mode = True
            if not self._reuse:
                self._archive_and_reset()
        return vid

    def _tree_best(self) -> float:
        if not self.goal_vids:
            return INF
        return min(self.tree.cost[v] for v in self.goal_vids)

    def _archive_and_reset(self) -> None:
        goal = min(self.goal_vids, key=lambda v: (self.tree.cost[v], v))
        self._archived_cost = self.tree.cost[goal]
        self._archived_path = np.array([self.index.config(i) for i in self.tree.path_ids(goal)])
        from ..nn import NeighborIndex
        from .base import EdgeCache
        from ..cspace import in_goal
        self.index = NeighborIndex(self.space)
        root = self.index.insert(self.scenario.start)
        self.tree = TreeRoadmap()
        self.cache = EdgeCache()
        self.goal_vids = [root] if in_goal(self.scenario, self.scenario.start) else []

    def _best_cost(self) -> float:
        return min(self._tree_best(), self._archived_cost)

    def result(self) -> PlannerResult:
        res = super().result() if self._tree_best() <= self._archived_cost else None
        if res is not None:
            return res
        # archived phase-1 path is still the best one
        saved_best = self._best
        self._best = INF  # suppress tree-path extraction
        res = super().result()
        self._best = saved_best
        res.best_cost = self._archived_cost
        res.path = self._archived_path
        res.trace.status = "solved"
        return res
