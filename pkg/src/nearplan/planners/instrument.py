"""Executable invariant checks: run a lower-bound-tree planner in lockstep
with an independent same-seed RRG and audit both roadmaps every iteration.

The shadow RRG rebuilds everything itself (own index, own collision calls,
own random stream seeded identically), so agreement is a real property of
the algorithms, not an artifact of shared state.  The audit verifies, at
every iteration boundary:

* vertex sets match exactly (same ids, bit-identical coordinates);
* every edge the shadow RRG added is present in the lower-bound graph;
* bounded approximation invariant for every vertex;
* lower bound invariant against the shadow RRG's cost table;
* every certified-tree edge has a cached Free verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .base import PlannerParams
from .lbt import LbtRrtPlanner
from .rrt import RrgPlanner

#: relative slack for cost comparisons; covers float accumulation only
REL_TOL = 1e-9


@dataclass
class ViolationReport:
    entries: list[str] = field(default_factory=list)
    #: max over vertices of |cost_apx - cost_rrg| / (1 + cost), final state
    eps0_gap: float = 0.0

    def ok(self) -> bool:
        return not self.entries

    def add(self, msg: str) -> None:
        if len(self.entries) < 100:
            self.entries.append(msg)


def audit_pair(lbt: LbtRrtPlanner, rrg: RrgPlanner, report: ViolationReport,
               edge_cursor: int, apx_cursor: int, where: str) -> tuple[int, int]:
    """One audit pass; returns advanced log cursors."""
    n_lbt, n_rrg = len(lbt.index), len(rrg.index)
    if n_lbt != n_rrg:
        report.add(f"{where}: vertex counts differ ({n_lbt} vs {n_rrg})")
        return edge_cursor, apx_cursor
    if n_lbt and not np.array_equal(lbt.index.coords(), rrg.index.coords()):
        report.add(f"{where}: vertex coordinates differ")

    log = rrg.edge_log
    for u, v in log[edge_cursor:]:
        if not lbt.glb.has_edge(u, v):
            report.add(f"{where}: shadow edge ({u}, {v}) missing from lower-bound graph")
    edge_cursor = len(log)

    apx_log = lbt.apx_edge_log
    for p, c in apx_log[apx_cursor:]:
        if lbt.cache.lookup(p, c) is not True:
            report.add(f"{where}: tree edge ({p}, {c}) lacks a Free certification")
    apx_cursor = len(apx_log)

    apx = np.asarray(lbt.apx.cost)
    glb = np.asarray(lbt.sssp.cost_list())
    ref = np.asarray(rrg.sssp.cost_list())
    slack = REL_TOL * (1.0 + np.abs(glb))
    bad = np.flatnonzero(apx > lbt.ope * glb + slack)
    for x in bad[:3]:
        report.add(f"{where}: bounded approximation violated at {x}: "
                   f"{apx[x]} > (1+eps)*{glb[x]}")
    bad = np.flatnonzero(glb > ref + REL_TOL * (1.0 + np.abs(ref)))
    for x in bad[:3]:
        report.add(f"{where}: lower bound violated at {x}: {glb[x]} > {ref[x]}")
    return edge_cursor, apx_cursor


def run_instrumented(scenario, params: PlannerParams,
                     rng_pair: Optional[tuple] = None,
                     clock=None) -> tuple[LbtRrtPlanner, RrgPlanner, ViolationReport]:
    """Run LBT-RRT and a shadow RRG in lockstep under an iteration budget,
    auditing every iteration boundary."""
    if params.iterations is None:
        raise ValueError("instrumented runs need an iteration budget")
    rng_lbt = rng_pair[0] if rng_pair else None
    rng_rrg = rng_pair[1] if rng_pair else None
    geometry: dict = {}
    lbt = LbtRrtPlanner(scenario, params, rng=rng_lbt, clock=clock, shared_geometry=geometry)
    rrg = RrgPlanner(scenario, params, rng=rng_rrg, clock=clock, shared_geometry=geometry)
    report = ViolationReport()
    ec = ac = 0
    for it in range(params.iterations):
        a = lbt.step()
        b = rrg.step()
        if (a is None) != (b is None):
            report.add(f"iter {it}: vertex addition mismatch ({a} vs {b})")
        ec, ac = audit_pair(lbt, rrg, report, ec, ac, f"iter {it}")
        if not report.ok() and len(report.entries) >= 100:
            break
    apx = np.asarray(lbt.apx.cost)
    ref = np.asarray(rrg.sssp.cost_list())
    if apx.size:
        report.eps0_gap = float(np.max(np.abs(apx - ref) / (1.0 + np.abs(ref))))
    return lbt, rrg, report


@dataclass
class SuiteResult:
    """Lockstep multi-planner run on one (scenario, seed): one shadow RRG,
    one plain RRT, and one lower-bound-tree planner per epsilon, all audited
    against the same shadow every iteration."""

    rrt: object
    rrg: RrgPlanner
    lbt: dict[float, LbtRrtPlanner]
    reports: dict[float, ViolationReport]

    def ok(self) -> bool:
        return all(r.ok() for r in self.reports.values())


def run_instrumented_suite(scenario, params: PlannerParams,
                           epsilons: tuple[float, ...] = (0.0, 0.1, 0.4),
                           clock=None) -> SuiteResult:
    """Criterion-style invariant suite: all planners share one geometry memo
    (identical queries are computed once) while keeping their own caches and
    call counters."""
    from dataclasses import replace

    from .rrt import RrtPlanner

    if params.iterations is None:
        raise ValueError("instrumented runs need an iteration budget")
    geometry: dict = {}
    rrt = RrtPlanner(scenario, params, clock=clock, shared_geometry=geometry)
    rrg = RrgPlanner(scenario, params, clock=clock, shared_geometry=geometry)
    lbts = {eps: LbtRrtPlanner(scenario, replace(params, epsilon=eps),
                               clock=clock, shared_geometry=geometry)
            for eps in epsilons}
    reports = {eps: ViolationReport() for eps in epsilons}
    cursors = {eps: (0, 0) for eps in epsilons}
    for it in range(params.iterations):
        rrt.step()
        b = rrg.step()
        for eps, lbt in lbts.items():
            a = lbt.step()
            rep = reports[eps]
            if (a is None) != (b is None):
                rep.add(f"iter {it}: vertex addition mismatch ({a} vs {b})")
            cursors[eps] = audit_pair(lbt, rrg, rep, *cursors[eps], f"iter {it}")
    ref = np.asarray(rrg.sssp.cost_list())
    for eps, lbt in lbts.items():
        apx = np.asarray(lbt.apx.cost)
        if apx.size:
            reports[eps].eps0_gap = float(np.max(np.abs(apx - ref) / (1.0 + np.abs(ref))))
    return SuiteResult(rrt=rrt, rrg=rrg, lbt=lbts, reports=reports)
