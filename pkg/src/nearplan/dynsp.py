"""Incremental shortest-path engines over mutable directed graphs.

Two engines are provided:

* ``SsspState`` maintains single-source cost-to-come and parent tables under
  edge insertions and deletions, returning the exact set of vertices whose
  cost changed.  Insertions repair by Dijkstra-style propagation from the
  improved endpoint; deletions identify the orphaned shortest-path subtree
  and repair it with a boundary-seeded Dijkstra.  No mutation triggers a
  blind full recompute.

* ``LpaState`` answers repeated source-to-goal-set queries under edge
  insertions and deletions, using the standard two-value (g, rhs) relaxation
  with an admissible, consistent heuristic.  The goal set is folded in via an
  implicit zero-weight sink.

Infinity is ``float("inf")``; arithmetic with it saturates.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable, Iterable, Optional

INF = float("inf")

#: internal LPA* sink id; sorts ahead of real vertices on key ties
_SINK = -1


class GraphError(ValueError):
    """Illegal graph mutation (duplicate edge, missing edge, bad weight)."""


class DynamicGraph:
    """Directed graph with nonnegative weights and no parallel edges."""

    def __init__(self, num_vertices: int = 0):
        self._out: list[dict[int, float]] = [dict() for _ in range(num_vertices)]
        self._in: list[dict[int, float]] = [dict() for _ in range(num_vertices)]
        self.num_edges = 0

    def __len__(self) -> int:
        return len(self._out)

    @property
    def num_vertices(self) -> int:
        return len(self._out)

    def add_vertex(self) -> int:
        self._out.append(dict())
        self._in.append(dict())
        return len(self._out) - 1

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self._out):
            raise GraphError(f"vertex {v} does not exist")

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < len(self._out) and v in self._out[u]

    def weight(self, u: int, v: int) -> float:
        try:
            return self._out[u][v]
        except (IndexError, KeyError):
            raise GraphError(f"edge ({u}, {v}) does not exist") from None

    def insert_edge(self, u: int, v: int, w: float) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if v in self._out[u]:
            raise GraphError(f"edge ({u}, {v}) already present")
        if not (w >= 0.0 and math.isfinite(w)):
            raise GraphError(f"edge weight must be finite and >= 0, got {w}")
        self._out[u][v] = w
        self._in[v][u] = w
        self.num_edges += 1

    def delete_edge(self, u: int, v: int) -> float:
        if not self.has_edge(u, v):
            raise GraphError(f"edge ({u}, {v}) does not exist")
        w = self._out[u].pop(v)
        self._in[v].pop(u)
        self.num_edges -= 1
        return w

    def out_edges(self, u: int) -> dict[int, float]:
        """Successor map of u.  Treat as read-only."""
        return self._out[u]

    def in_edges(self, v: int) -> dict[int, float]:
        """Predecessor map of v.  Treat as read-only."""
        return self._in[v]

    def edges(self) -> Iterable[tuple[int, int, float]]:
        for u, nbrs in enumerate(self._out):
            for v, w in nbrs.items():
                yield u, v, w


def dijkstra(graph: DynamicGraph, source: int) -> tuple[list[float], list[Optional[int]]]:
    """From-scratch Dijkstra; the oracle the incremental engines must match."""
    n = graph.num_vertices
    cost: list[float] = [INF] * n
    parent: list[Optional[int]] = [None] * n
    cost[source] = 0.0
    heap: list[tuple[float, int, int]] = [(0.0, source, -1)]
    while heap:
        k, x, _p = heapq.heappop(heap)
        if k > cost[x]:
            continue
        for y, w in graph.out_edges(x).items():
            nk = k + w
            if nk < cost[y]:
                cost[y] = nk
                parent[y] = x
                heapq.heappush(heap, (nk, y, x))
    return cost, parent


class SsspState:
    """Dynamic single-source shortest paths with exact affected-set reporting.

    ``max_affected`` records the largest affected set returned by any single
    mutation (a diagnostic, not a contract).
    """

    def __init__(self, graph: DynamicGraph, source: int):
        graph._check_vertex(source)
        self.graph = graph
        self.source = source
        self._cost: list[float] = []
        self._parent: list[Optional[int]] = []
        self._children: list[set[int]] = []
        self.max_affected = 0
        self._sync()
        if graph.num_edges:
            cost, parent = dijkstra(graph, source)
            self._cost = cost
            self._parent = parent
            for v, p in enumerate(parent):
                if p is not None:
                    self._children[p].add(v)
        self._cost[source] = 0.0

    def _sync(self) -> None:
        n = self.graph.num_vertices
        while len(self._cost) < n:
            self._cost.append(INF)
            self._parent.append(None)
            self._children.append(set())

    def cost(self, x: int) -> float:
        try:
            return self._cost[x]
        except IndexError:
            self._sync()
            return self._cost[x]

    def parent(self, x: int) -> Optional[int]:
        try:
            return self._parent[x]
        except IndexError:
            self._sync()
            return self._parent[x]

    def cost_list(self) -> list[float]:
        self._sync()
        return list(self._cost)

    def _record(self, affected_size: int) -> None:
        if affected_size > self.max_affected:
            self.max_affected = affected_size

    def insert_edge(self, u: int, v: int, w: float) -> set[int]:
        """Insert (u, v) and return the vertices whose cost decreased."""
        self._sync()
        self.graph.insert_edge(u, v, w)
        cost, parent, children = self._cost, self._parent, self._children
        start = cost[u] + w
        if not start < cost[v]:
            return set()
        affected: set[int] = set()
        heap: list[tuple[float, int, int]] = [(start, v, u)]
        out = self.graph.out_edges
        while heap:
            k, x, p = heapq.heappop(heap)
            if not k < cost[x]:
                continue
            old_p = parent[x]
            if old_p is not None:
                children[old_p].discard(x)
            cost[x] = k
            parent[x] = p
            children[p].add(x)
            affected.add(x)
            for y, wxy in out(x).items():
                nk = k + wxy
                if nk < cost[y]:
                    heapq.heappush(heap, (nk, y, x))
        self._record(len(affected))
        return affected

    def delete_edge(self, u: int, v: int) -> set[int]:
        """Delete (u, v) and return the vertices whose cost increased
        (including those that became unreachable)."""
        self._sync()
        self.graph.delete_edge(u, v)
        cost, parent, children = self._cost, self._parent, self._children
        if parent[v] != u:
            return set()
        # orphaned region: the shortest-path subtree hanging off (u, v)
        region: list[int] = []
        stack = [v]
        while stack:
            x = stack.pop()
            region.append(x)
            stack.extend(children[x])
        in_region = set(region)
        old_cost = {x: cost[x] for x in region}
        children[u].discard(v)
        for x in region:
            cost[x] = INF
            parent[x] = None
            children[x].clear()
        # repair: seed from best edges entering the region from outside
        heap: list[tuple[float, int, int]] = []
        inn = self.graph.in_edges
        for x in region:
            for p, wpx in inn(x).items():
                if p not in in_region and cost[p] < INF:
                    heap.append((cost[p] + wpx, x, p))
        heapq.heapify(heap)
        out = self.graph.out_edges
        while heap:
            k, x, p = heapq.heappop(heap)
            if not k < cost[x]:
                continue
            cost[x] = k
            parent[x] = p
            children[p].add(x)
            for y, wxy in out(x).items():
                if y in in_region:
                    nk = k + wxy
                    if nk < cost[y]:
                        heapq.heappush(heap, (nk, y, x))
        affected = {x for x in region if cost[x] != old_cost[x]}
        self._record(len(affected))
        return affected

    def dump(self) -> str:
        """One ``id cost parent`` line per vertex, for oracle diffing."""
        self._sync()
        lines = []
        for v in range(self.graph.num_vertices):
            p = self._parent[v]
            lines.append(f"{v} {self._cost[v]!r} {'-' if p is None else p}")
        return "\n".join(lines)


class LpaError(RuntimeError):
    """LPA* query made in an invalid state (stale results, off-path parent)."""


class LpaState:
    """Incremental source-to-goal-set shortest paths.

    ``heuristic(v)`` must be admissible and consistent toward the goal set
    and zero on goal vertices; ``is_goal(v)`` marks goal-set membership.
    Both are evaluated once per vertex.
    """

    def __init__(self, graph: DynamicGraph, source: int,
                 heuristic: Optional[Callable[[int], float]] = None,
                 is_goal: Optional[Callable[[int], bool]] = None):
        graph._check_vertex(source)
        self.graph = graph
        self.source = source
        self._h_fn = heuristic or (lambda v: 0.0)
        self._goal_fn = is_goal or (lambda v: False)
        self._g: dict[int, float] = {_SINK: INF}
        self._rhs: dict[int, float] = {_SINK: INF}
        self._h: dict[int, float] = {_SINK: 0.0}
        self._goals: set[int] = set()
        self._known = 0
        self._heap: list[tuple] = []
        self._key_of: dict[int, Optional[tuple]] = {}
        self._fresh = False
        self._sync()
        self._rhs[source] = 0.0
        self._push(source)
        # adopt any edges already present
        for u, v, _w in list(graph.edges()):
            self._update_vertex(v)

    # -- vertex bookkeeping ------------------------------------------------

    def _sync(self) -> None:
        n = self.graph.num_vertices
        while self._known < n:
            v = self._known
            self._g[v] = INF
            self._rhs[v] = INF
            self._h[v] = float(self._h_fn(v))
            if self._goal_fn(v):
                self._goals.add(v)
            self._known += 1

    def vertex_added(self, vid: int) -> None:
        """Register vertices appended to the graph since the last call."""
        self._sync()
        if vid in self._goals:
            self._update_vertex(_SINK)
            self._fresh = False

    # -- queue helpers -------------------------------------------------------

    def _key(self, v: int):
        # the sink is reached by zero-weight edges, so on exact key ties it
        # must sort after every real vertex or stale goal values could
        # survive termination
        m = min(self._g[v], self._rhs[v])
        return (m + self._h[v], m, math.inf if v == _SINK else v, v)

    def _push(self, v: int) -> None:
        key = self._key(v)
        self._key_of[v] = key
        heapq.heappush(self._heap, key)

    def _update_vertex(self, v: int) -> None:
        if v == _SINK:
            self._rhs[_SINK] = min((self._g[x] for x in self._goals), default=INF)
        elif v != self.source:
            best = INF
            for u, w in self.graph.in_edges(v).items():
                c = self._g[u] + w
                if c < best:
                    best = c
            self._rhs[v] = best
        if self._g[v] != self._rhs[v]:
            self._push(v)
        else:
            self._key_of[v] = None

    def _succ(self, v: int):
        for pair in self.graph.out_edges(v).items():
            yield pair[0]
        if v in self._goals:
            yield _SINK

    # -- mutations -----------------------------------------------------------

    def insert_edge(self, u: int, v: int, w: float) -> None:
        self._sync()
        self.graph.insert_edge(u, v, w)
        self._update_vertex(v)
        self._fresh = False

    def delete_edge(self, u: int, v: int) -> None:
        self._sync()
        self.graph.delete_edge(u, v)
        self._update_vertex(v)
        self._fresh = False

    # -- queries ---------------------------------------------------------------

    def shortest_path(self) -> Optional[int]:
        """Recompute up to the cheapest goal vertex; None if unreachable."""
        self._sync()
        g, rhs = self._g, self._rhs
        while self._heap:
            key = self._heap[0]
            v = key[3]
            if self._key_of.get(v) != key:
                heapq.heappop(self._heap)
                continue
            sink_key = self._key(_SINK)
            if not (key < sink_key or g[_SINK] != rhs[_SINK]):
                break
            heapq.heappop(self._heap)
            self._key_of[v] = None
            if g[v] > rhs[v]:
                g[v] = rhs[v]
                for s in self._succ(v):
                    self._update_vertex(s)
            else:
                g[v] = INF
                self._update_vertex(v)
                for s in self._succ(v):
                    self._update_vertex(s)
        self._fresh = True
        if g[_SINK] == INF:
            return None
        return min(self._goals, key=lambda x: (g[x], x))

    def cost(self) -> float:
        """Cheapest goal cost; requires shortest_path() since the last mutation."""
        if not self._fresh:
            raise LpaError("cost() requires shortest_path() after the last mutation")
        return self._g[_SINK]

    def cost_to(self, x: int) -> float:
        if not self._fresh:
            raise LpaError("cost_to() requires shortest_path() after the last mutation")
        return self._g.get(x, INF)

    def parent(self, x: int) -> int:
        """Predecessor of x along a shortest path from the source."""
        if not self._fresh:
            raise LpaError("parent() requires shortest_path() after the last mutation")
        if x == self.source:
            raise LpaError("the source has no parent")
        gx = self._g.get(x, INF)
        if gx == INF or gx != self._rhs.get(x, INF):
            raise LpaError(f"vertex {x} is not on a settled shortest path")
        best: Optional[tuple[float, int]] = None
        for u, w in self.graph.in_edges(x).items():
            cand = (self._g[u] + w, u)
            if best is None or cand < best:
                best = cand
        if best is None or best[0] != gx:
            raise LpaError(f"vertex {x} has no consistent parent")
        return best[1]
