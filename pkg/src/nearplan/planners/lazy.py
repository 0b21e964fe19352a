"""Lazy, goal-biased lower-bound-tree RRT.

The bounded approximation invariant is relaxed to hold only for the goal
set, so the all-vertex dynamic shortest-path engine is replaced by two
incremental start-to-goal-set searches: one over the lazily grown
lower-bound graph, one over the certified-edge roadmap.  Candidate edges are
inserted into the lower-bound graph without any collision check; only when a
goal path appears whose certified counterpart is more than (1 + eps) longer
does the planner walk that path backward, certifying edges one by one —
grafting free ones into the certified roadmap and deleting blocked ones from
the graph before re-querying.

Until some vertex lands in the goal region the lower-bound goal cost stays
infinite, the invariant cannot be violated, and the only local-planner calls
are the per-iteration nearest-edge checks: exactly RRT's schedule.
"""

from __future__ import annotations

from ..cspace import distance, distances_to, in_goal
from ..dynsp import DynamicGraph, LpaState
from ..nn import rrg_neighbor_count
from .base import INF, PlannerResult, TreePlannerBase


class LazyLbtRrtPlanner(TreePlannerBase):
    name = "lazy_lbt_rrt"

    def _init_structures(self, root: int) -> None:
        self.ope = 1.0 + self.params.epsilon
        self.glb = DynamicGraph(1)
        self.apx = DynamicGraph(1)
        goal = self.scenario.goal

        def h(v: int) -> float:
            return max(0.0, distance(self.space, self.index.config(v), goal.center) - goal.radius)

        def is_goal(v: int) -> bool:
            return in_goal(self.scenario, self.index.config(v))

        self.lpa_lb = LpaState(self.glb, root, heuristic=h, is_goal=is_goal)
        self.lpa_apx = LpaState(self.apx, root, heuristic=h, is_goal=is_goal)
        self.root = root

    def _on_vertex(self, vid, cfg, nearest_id, w) -> None:
        self.glb.add_vertex()
        self.apx.add_vertex()
        self.lpa_lb.vertex_added(vid)
        self.lpa_apx.vertex_added(vid)
        self.lpa_apx.insert_edge(nearest_id, vid, w)
        self.lpa_lb.insert_edge(nearest_id, vid, w)
        self.lpa_lb.insert_edge(vid, nearest_id, w)
        self._restore_goal_invariant()
        k = rrg_neighbor_count(len(self.index))
        nbrs = self.index.k_nearest(cfg, k, exclude=vid)
        if not nbrs:
            return
        dists = distances_to(self.space, self.index.coords()[nbrs], cfg)
        for nb, dnb in zip(nbrs, dists):
            self._consider_edge_goal_biased(nb, vid, float(dnb))
        for nb, dnb in zip(nbrs, dists):
            self._consider_edge_goal_biased(vid, nb, float(dnb))

    def _consider_edge_goal_biased(self, u: int, v: int, w: float) -> None:
        if self.glb.has_edge(u, v):
            return
        if self.cache.lookup(u, v) is False:
            return  # known blocked: pointless to re-add lazily
        self.lpa_lb.insert_edge(u, v, w)
        self._restore_goal_invariant()

    def _restore_goal_invariant(self) -> None:
        """Certify lower-bound goal paths until the relaxed invariant holds."""
        lb, apx = self.lpa_lb, self.lpa_apx
        for _ in range(1_000_000):
            goal_v = lb.shortest_path()
            if goal_v is None:
                return
            c_lb = lb.cost()
            apx.shortest_path()
            c_apx = apx.cost()
            if not (c_apx > self.ope * c_lb):
                return
            x = goal_v
            deleted = False
            while c_apx > self.ope * c_lb:
                p = lb.parent(x)
                if self._certify(p, x):
                    if not self.apx.has_edge(p, x):
                        apx.insert_edge(p, x, self.glb.weight(p, x))
                        apx.shortest_path()
                        c_apx = apx.cost()
                    x = p
                    if x == self.root:
                        break
                else:
                    lb.delete_edge(p, x)
                    deleted = True
                    break
            if not deleted and not (c_apx > self.ope * c_lb):
                return
            # otherwise re-query the (possibly repaired) lower-bound path
        raise RuntimeError("relaxed invariant restoration did not converge")

    def goal_costs(self) -> tuple[float, float]:
        """(certified goal cost, lower-bound goal cost), both refreshed."""
        self.lpa_lb.shortest_path()
        self.lpa_apx.shortest_path()
        return self.lpa_apx.cost(), self.lpa_lb.cost()

    def _best_cost(self) -> float:
        self.lpa_apx.shortest_path()
        return self.lpa_apx.cost()

    def _best_goal(self) -> int:
        goal_v = self.lpa_apx.shortest_path()
        if goal_v is None:
            raise RuntimeError("no certified goal path")
        return goal_v

    def _edge_count(self) -> int:
        return self.glb.num_edges

    def _path_ids(self, goal_vid: int) -> list[int]:
        ids = [goal_vid]
        while ids[-1] != self.root:
            ids.append(self.lpa_apx.parent(ids[-1]))
        ids.reverse()
        return ids

    def _build_result(self, path) -> PlannerResult:
        self.lpa_apx.shortest_path()
        cost = [self.lpa_apx.cost_to(v) for v in range(len(self.index))]
        return PlannerResult(
            planner=self.name, scenario_name=self.scenario.name,
            configs=self.index.coords().copy(),
            parent=None, cost=cost,
            graph_edges=list(self.glb.edges()), goal_vids=list(self.goal_vids),
            best_cost=self._best, path=path, trace=self.trace,
            extra={"apx_edges": list(self.apx.edges())})
