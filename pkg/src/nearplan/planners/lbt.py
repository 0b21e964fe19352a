"""Lower-bound-tree RRT: asymptotically near-optimal planning with a tunable
approximation factor.

Two roadmaps share one vertex set.  The lower-bound structure is a *graph*
``G_lb`` whose shortest paths are maintained by the dynamic single-source
engine; its edges are inserted lazily (without collision checks), so its
cost-to-come lower-bounds what RRG would compute on the same samples.  The
approximation structure ``T_apx`` is a tree of certified collision-free
edges.  After every iteration both invariants hold:

* bounded approximation: cost_apx(x) <= (1 + eps) * cost_lb(x) for all x;
* lower bound: cost_lb(x) <= cost_rrg(x) for all x.

Restoring the first invariant after a lazy insertion drives all local-planner
work: violated vertices are processed in ascending lower-bound cost, each
either grafted onto its shortest-path parent (edge certified free) or the
offending lazy edge is deleted from the graph (edge certified blocked).

Two standard optimizations are applied: the neighbor set is traversed in
ascending potential-cost order, and an edge whose insertion would immediately
violate the invariant at its head is certified *before* insertion so blocked
edges never enter the graph.
"""

from __future__ import annotations

import heapq

import numpy as np

from ..cspace import distances_to
from ..dynsp import DynamicGraph, SsspState
from ..nn import rrg_neighbor_count
from .base import INF, PlannerResult, TreePlannerBase, TreeRoadmap


class LbtRrtPlanner(TreePlannerBase):
    name = "lbt_rrt"

    def _init_structures(self, root: int) -> None:
        self.ope = 1.0 + self.params.epsilon
        self.glb = DynamicGraph(1)
        self.sssp = SsspState(self.glb, root)
        self.apx = TreeRoadmap()
        # (parent, child) pairs grafted into T_apx, for certification audits
        self.apx_edge_log: list[tuple[int, int]] = []

    def _on_vertex(self, vid, cfg, nearest_id, w) -> None:
        self.glb.add_vertex()
        self.apx.add_vertex(nearest_id, w)
        self.apx_edge_log.append((nearest_id, vid))
        # the certified nearest edge enters the graph in both directions,
        # mirroring RRG's bidirectional insertion
        self.sssp.insert_edge(nearest_id, vid, w)
        self.sssp.insert_edge(vid, nearest_id, w)
        k = rrg_neighbor_count(len(self.index))
        nbrs = self.index.k_nearest(cfg, k, exclude=vid)
        if not nbrs:
            return
        dists = distances_to(self.space, self.index.coords()[nbrs], cfg)
        cost = self.sssp.cost
        order = sorted(range(len(nbrs)),
                       key=lambda i: (cost(nbrs[i]) + dists[i], nbrs[i]))
        for i in order:
            self._consider_edge(nbrs[i], vid, float(dists[i]))
        for i in order:
            self._consider_edge(vid, nbrs[i], float(dists[i]))

    def _consider_edge(self, u: int, v: int, w: float) -> None:
        """Lazily insert (u, v) into the lower-bound graph and restore the
        bounded approximation invariant."""
        if self.glb.has_edge(u, v):
            return
        sssp = self.sssp
        apx_cost = self.apx.cost
        ope = self.ope
        improved = sssp.cost(u) + w
        if improved < sssp.cost(v) and apx_cost[v] > ope * improved:
            # insertion would violate the invariant at v: certify first and
            # drop the edge outright when it is blocked
            if not self._certify(u, v):
                return
        affected = sssp.insert_edge(u, v, w)
        if not affected:
            return
        # violated vertices, processed in ascending lower-bound cost
        keys: dict[int, tuple[float, int]] = {}
        heap: list[tuple[float, int]] = []
        for x in affected:
            if apx_cost[x] > ope * sssp.cost(x):
                key = (sssp.cost(x), x)
                keys[x] = key
                heap.append(key)
        heapq.heapify(heap)
        while keys:
            key = heapq.heappop(heap)
            x = key[1]
            if keys.get(x) != key:
                continue
            if apx_cost[x] > ope * sssp.cost(x):
                p = sssp.parent(x)
                if self._certify(p, x):
                    self.apx.reparent(x, p, self.glb.weight(p, x))
                    self.apx_edge_log.append((p, x))
                    del keys[x]
                else:
                    changed = sssp.delete_edge(p, x)
                    for y in changed:
                        if y in keys and y != x:
                            nk = (sssp.cost(y), y)
                            keys[y] = nk
                            heapq.heappush(heap, nk)
                    # the head stays queued; its entry was consumed above, so
                    # re-push it even when the deletion left its cost intact
                    nk = (sssp.cost(x), x)
                    keys[x] = nk
                    heapq.heappush(heap, nk)
            else:
                del keys[x]

    def _best_cost(self) -> float:
        if not self.goal_vids:
            return INF
        return min(self.apx.cost[v] for v in self.goal_vids)

    def _best_goal(self) -> int:
        return min(self.goal_vids, key=lambda v: (self.apx.cost[v], v))

    def _edge_count(self) -> int:
        return self.glb.num_edges

    def _delta_hat(self) -> int:
        return self.sssp.max_affected

    def _path_ids(self, goal_vid: int) -> list[int]:
        return self.apx.path_ids(goal_vid)

    def _build_result(self, path) -> PlannerResult:
        return PlannerResult(
            planner=self.name, scenario_name=self.scenario.name,
            configs=self.index.coords().copy(),
            parent=list(self.apx.parent), cost=list(self.apx.cost),
            graph_edges=list(self.glb.edges()), goal_vids=list(self.goal_vids),
            best_cost=self._best, path=path, trace=self.trace,
            extra={"lb_cost": self.sssp.cost_list()})
