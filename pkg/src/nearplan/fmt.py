"""Batch planners: FMT*, its anytime doubling wrapper, and the near-optimal
variant that reuses cached local-planner verdicts across doublings.

FMT* grows a minimum-cost spanning tree outward from the start over a fixed
sample set, connecting each unvisited vertex to its locally best open parent
with a single local-planner call.  The anytime wrapper repeats it with the
sample count doubling every round, reusing all previous samples (so vertex
ids are stable between rounds).  The cached variant keeps two trees: a lazy
lower-bound tree whose edges need no collision checks, and a certified tree
restricted to cached-free edges; a fresh local-planner call is spent only
when the certified cost exceeds (1 + eps) times the lazy cost.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cspace import (CheckCounters, Scenario, collision_free_motion,
                     distances_to, in_goal, sample_free)
from .planners.base import INF, AnytimeTrace, EdgeCache


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def default_gamma(scenario: Scenario) -> float:
    """Connection-radius scale from the bounding-box volume (obstacles
    ignored): a deliberate overestimate that keeps desk-scale roadmaps
    connected."""
    sp = scenario.space
    d = sp.dimension
    mu = 1.0
    for i in sp.euclid_idx:
        mu *= sp.bounds[i, 1] - sp.bounds[i, 0]
    if sp.has_angular:
        mu *= 2.0 * math.pi * sp.w_theta
    return 1.1 * 2.0 * ((mu / d) / unit_ball_volume(d)) ** (1.0 / d)


def connection_radius(n: int, d: int, gamma: float) -> float:
    """r(n) = gamma * (ln n / n)^(1/d)."""
    if n < 2:
        raise ValueError("connection radius needs n >= 2")
    return gamma * (math.log(n) / n) ** (1.0 / d)


@dataclass
class FmtResult:
    status: str  # "solved" | "failure"
    best_cost: float
    path: Optional[np.ndarray]
    trace: AnytimeTrace
    rounds: list[tuple[int, float, float]] = field(default_factory=list)  # (n, cost, elapsed)
    configs: Optional[np.ndarray] = None

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def _neighbor_lists(scenario, configs: np.ndarray, r: float):
    """Per-vertex in-radius neighbor ids and distances, sorted by (d, id)."""
    n = configs.shape[0]
    out = []
    for v in range(n):
        d = distances_to(scenario.space, configs, configs[v])
        ids = np.flatnonzero(d <= r)
        ids = ids[ids != v]
        order = np.lexsort((ids, d[ids]))
        ids = ids[order]
        out.append((ids, d[ids]))
    return out


def _extract(configs: np.ndarray, parent: np.ndarray, v: int) -> np.ndarray:
    ids = [v]
    while parent[ids[-1]] >= 0:
        ids.append(parent[ids[-1]])
    ids.reverse()
    return configs[ids]


def _fmt_pass(scenario: Scenario, configs: np.ndarray, gamma: float,
              certify: Callable[[int, int], bool]):
    """One lazily-optimal sweep; returns (goal_vid or None, cost, parent)."""
    n = configs.shape[0]
    cost = np.full(n, INF)
    parent = np.full(n, -1, dtype=int)
    cost[0] = 0.0
    if n == 1:
        return (0, 0.0, parent) if in_goal(scenario, configs[0]) else (None, INF, parent)
    r = connection_radius(n, scenario.space.dimension, gamma)
    nbrs = _neighbor_lists(scenario, configs, r)
    in_h = np.zeros(n, dtype=bool)
    unvisited = np.ones(n, dtype=bool)
    unvisited[0] = False
    in_h[0] = True
    heap: list[tuple[float, int]] = [(0.0, 0)]
    while heap:
        c, z = heapq.heappop(heap)
        if not in_h[z] or c != cost[z]:
            continue
        if in_goal(scenario, configs[z]):
            return z, float(cost[z]), parent
        h_new: list[int] = []
        ids_z, _d_z = nbrs[z]
        for x_raw in ids_z:
            x = int(x_raw)
            if not unvisited[x]:
                continue
            ids_x, d_x = nbrs[x]
            mask = in_h[ids_x]
            if not mask.any():
                continue  # no open neighbor: stays unvisited
            cand = ids_x[mask]
            cand_d = d_x[mask]
            totals = cost[cand] + cand_d
            i = int(np.argmin(totals))  # ids sorted, so ties pick the smallest id
            if certify(int(cand[i]), x):
                parent[x] = int(cand[i])
                cost[x] = float(totals[i])
                unvisited[x] = False
                h_new.append(x)
        in_h[z] = False
        for x in h_new:
            in_h[x] = True
            heapq.heappush(heap, (float(cost[x]), x))
    return None, INF, parent


def run_fmt(scenario: Scenario, n: int, gamma: Optional[float] = None,
            rng: Optional[np.random.Generator] = None, seed: int = 0,
            delta: Optional[float] = None) -> FmtResult:
    """Single-batch FMT* with n vertices (the start plus n - 1 free samples)."""
    if n < 1:
        raise ValueError("sample count must be >= 1")
    if rng is None:
        rng = np.random.default_rng(seed)
    if gamma is None:
        gamma = default_gamma(scenario)
    counters = CheckCounters()
    trace = AnytimeTrace()
    samples = [scenario.start] + [sample_free(scenario, rng, counters) for _ in range(n - 1)]
    configs = np.asarray(samples)
    lp = [0]

    def certify(u: int, v: int) -> bool:
        lp[0] += 1
        return collision_free_motion(scenario, configs[u], configs[v], delta, counters)

    goal_vid, cost, parent = _fmt_pass(scenario, configs, gamma, certify)
    trace.samples = n
    trace.lp_calls = lp[0]
    trace.cc_calls = counters.config_checks
    trace.vertices = n
    trace.edges = int(np.count_nonzero(parent >= 0))
    if goal_vid is None:
        trace.status = "no_solution"
        return FmtResult("failure", INF, None, trace, configs=configs)
    trace.status = "solved"
    trace.events.append((0.0, 1, cost))
    return FmtResult("solved", cost, _extract(configs, parent, goal_vid), trace,
                     configs=configs)


def _run_anytime(scenario: Scenario, n0: int, budget: float, gamma: Optional[float],
                 rng: Optional[np.random.Generator], seed: int,
                 clock: Optional[Callable[[], float]], stop_cost: Optional[float],
                 counters: CheckCounters, pass_fn) -> FmtResult:
    """Doubling loop shared by both anytime planners.  Always completes at
    least one round; stops when the budget is spent or the best cost drops
    below stop_cost."""
    if n0 < 1:
        raise ValueError("initial sample count must be >= 1")
    if rng is None:
        rng = np.random.default_rng(seed)
    if clock is None:
        clock = time.perf_counter
    trace = AnytimeTrace()
    samples: list[np.ndarray] = [scenario.start]
    best = INF
    best_path = None
    rounds: list[tuple[int, float, float]] = []
    t0 = clock()
    n = n0
    iteration = 0
    while True:
        iteration += 1
        while len(samples) < n:
            samples.append(sample_free(scenario, rng, counters))
        configs = np.asarray(samples)
        goal_vid, cost, parent = pass_fn(configs)
        elapsed = clock() - t0
        rounds.append((n, cost, elapsed))
        if cost < best:
            best = cost
            best_path = _extract(configs, parent, goal_vid)
            trace.events.append((elapsed, iteration, best))
        if clock() - t0 >= budget:
            break
        if stop_cost is not None and best < stop_cost:
            break
        n *= 2
    trace.samples = len(samples)
    trace.cc_calls = counters.config_checks
    trace.vertices = len(samples)
    trace.iterations = iteration
    trace.elapsed = clock() - t0
    trace.status = "solved" if best < INF else "no_solution"
    status = "solved" if best < INF else "failure"
    return FmtResult(status, best, best_path, trace, rounds=rounds)


def run_afmt(scenario: Scenario, n0: int, budget: float,
             gamma: Optional[float] = None, rng: Optional[np.random.Generator] = None,
             seed: int = 0, delta: Optional[float] = None,
             clock: Optional[Callable[[], float]] = None,
             stop_cost: Optional[float] = None) -> FmtResult:
    """Anytime FMT*: double the sample count while the budget lasts, reusing
    all samples from previous rounds.  Collision results are not reused."""
    if gamma is None:
        gamma = default_gamma(scenario)
    counters = CheckCounters()
    lp = [0]

    def pass_fn(configs):
        def certify(u: int, v: int) -> bool:
            lp[0] += 1
            return collision_free_motion(scenario, configs[u], configs[v], delta, counters)
        return _fmt_pass(scenario, configs, gamma, certify)

    result = _run_anytime(scenario, n0, budget, gamma, rng, seed, clock,
                          stop_cost, counters, pass_fn)
    result.trace.lp_calls = lp[0]
    return result


def run_lbt_afmt(scenario: Scenario, epsilon: float, n0: int, budget: float,
                 gamma: Optional[float] = None, rng: Optional[np.random.Generator] = None,
                 seed: int = 0, delta: Optional[float] = None,
                 clock: Optional[Callable[[], float]] = None,
                 stop_cost: Optional[float] = None) -> FmtResult:
    """Anytime FMT* under the (1 + eps) lower-bound framework, with a
    collision cache persisting across doublings (sample reuse keeps vertex
    ids stable, so cached verdicts stay valid)."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    ope = 1.0 + epsilon
    cache = EdgeCache()
    counters = CheckCounters()
    lp = [0]
    if gamma is None:
        gamma = default_gamma(scenario)

    def pass_fn(configs):
        return _lbt_fmt_pass(scenario, configs, gamma, delta, counters, cache, lp, ope)

    result = _run_anytime(scenario, n0, budget, gamma, rng, seed, clock,
                          stop_cost, counters, pass_fn)
    result.trace.lp_calls = lp[0]
    result.trace.edges = len(cache)
    return result


def _lbt_fmt_pass(scenario: Scenario, configs: np.ndarray, gamma: float,
                  delta: Optional[float], counters: CheckCounters,
                  cache: EdgeCache, lp: list, ope: float):
    """One doubling round of the cached near-optimal sweep.

    Expansion order follows the lower-bound tree cost.  The returned parent
    table is the certified tree; every edge on it has a cached Free verdict.
    """
    n = configs.shape[0]
    c_lb = np.full(n, INF)
    c_apx = np.full(n, INF)
    p_apx = np.full(n, -1, dtype=int)
    c_lb[0] = c_apx[0] = 0.0
    if n == 1:
        ok = in_goal(scenario, configs[0])
        return (0, 0.0, p_apx) if ok else (None, INF, p_apx)
    r = connection_radius(n, scenario.space.dimension, gamma)
    nbrs = _neighbor_lists(scenario, configs, r)

    def certify(u: int, v: int) -> bool:
        hit = cache.lookup(u, v)
        if hit is not None:
            return hit
        lp[0] += 1
        free = collision_free_motion(scenario, configs[u], configs[v], delta, counters)
        cache.store(u, v, free)
        return free

    in_h = np.zeros(n, dtype=bool)
    unvisited = np.ones(n, dtype=bool)
    unvisited[0] = False
    in_h[0] = True
    heap: list[tuple[float, int]] = [(0.0, 0)]
    while heap:
        c, z = heapq.heappop(heap)
        if not in_h[z] or c != c_lb[z]:
            continue
        if in_goal(scenario, configs[z]):
            return z, float(c_apx[z]), p_apx
        h_new: list[int] = []
        ids_z, _ = nbrs[z]
        for x_raw in ids_z:
            x = int(x_raw)
            if not unvisited[x]:
                continue
            ids_x, d_x = nbrs[x]
            mask = in_h[ids_x]
            if not mask.any():
                continue
            cand = ids_x[mask]
            cand_d = d_x[mask]
            lb_tot = c_lb[cand] + cand_d
            i = int(np.argmin(lb_tot))
            y_lb = int(cand[i])
            best_lb = float(lb_tot[i])
            # best certified parent among cached-free neighbors (may be none)
            best_apx = INF
            y_apx = -1
            for j in range(cand.shape[0]):
                y = int(cand[j])
                if cache.lookup(y, x) is True:
                    t = c_apx[y] + cand_d[j]
                    if t < best_apx:
                        best_apx = float(t)
                        y_apx = y
            if best_apx <= ope * best_lb:
                c_lb[x] = best_lb
                p_apx[x] = y_apx
                c_apx[x] = best_apx
            elif certify(y_lb, x):
                c_lb[x] = best_lb
                p_apx[x] = y_lb
                c_apx[x] = float(c_apx[y_lb] + cand_d[i])
            else:
                continue  # blocked: stays unvisited, may connect via a later z
            unvisited[x] = False
            h_new.append(x)
        in_h[z] = False
        for x in h_new:
            in_h[x] = True
            heapq.heappush(heap, (float(c_lb[x]), x))
    return None, INF, p_apx
