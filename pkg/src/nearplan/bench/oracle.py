"""Independent best-known-cost oracle: fine-grid Dijkstra with octile
connectivity over the planar workspace.

The grid is built directly from the obstacle polygons (with the disc-robot
radius folded in as an inflation margin), so the oracle shares no code path
with the planners' collision checking.  Diagonal moves are allowed only when
both adjacent orthogonal cells are free, which keeps grid paths realizable
as continuous paths and hence keeps the oracle an upper bound on the true
optimum.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as sparse_dijkstra

from ..cspace import Scenario


def occupancy(scenario: Scenario, resolution: int,
              extra_obstacles: Sequence[np.ndarray] = ()) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Free-cell mask plus cell-center coordinate vectors (xs, ys)."""
    sp = scenario.space
    if sp.dimension != 2 or scenario.robot.kind not in ("point", "disc"):
        raise ValueError("the grid oracle supports planar point/disc scenarios only")
    (x0, x1), (y0, y1) = sp.bounds[0], sp.bounds[1]
    xs = x0 + (np.arange(resolution) + 0.5) * (x1 - x0) / resolution
    ys = y0 + (np.arange(resolution) + 0.5) * (y1 - y0) / resolution
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    px, py = X.ravel(), Y.ravel()
    free = np.ones(px.shape[0], dtype=bool)
    r = scenario.robot.radius if scenario.robot.kind == "disc" else 0.0
    if r > 0:
        free &= (px >= x0 + r) & (px <= x1 - r) & (py >= y0 + r) & (py <= y1 - r)
    polys = list(scenario.obstacles) + [np.asarray(p, dtype=float) for p in extra_obstacles]
    for poly in polys:
        vx, vy = poly[:, 0], poly[:, 1]
        wx, wy = np.roll(vx, -1), np.roll(vy, -1)
        inside = np.zeros(px.shape[0], dtype=bool)
        for k in range(len(vx)):
            y1e, y2e = vy[k], wy[k]
            if y1e == y2e:
                continue
            straddle = (y1e > py) != (y2e > py)
            xint = vx[k] + (py - y1e) * (wx[k] - vx[k]) / (y2e - y1e)
            inside ^= straddle & (xint > px)
        free &= ~inside
        if r > 0:
            dx, dy = wx - vx, wy - vy
            denom = dx * dx + dy * dy
            mind = np.full(px.shape[0], np.inf)
            for k in range(len(vx)):
                if denom[k] == 0:
                    d2 = (px - vx[k]) ** 2 + (py - vy[k]) ** 2
                else:
                    t = np.clip(((px - vx[k]) * dx[k] + (py - vy[k]) * dy[k]) / denom[k], 0.0, 1.0)
                    d2 = (px - (vx[k] + t * dx[k])) ** 2 + (py - (vy[k] + t * dy[k])) ** 2
                np.minimum(mind, d2, out=mind)
            free &= mind > r * r
    return free.reshape(resolution, resolution), xs, ys


def grid_cost(scenario: Scenario, resolution: int = 480,
              extra_obstacles: Sequence[np.ndarray] = ()) -> float:
    """Length of the cheapest octile grid path from the start cell into the
    goal ball.  Raises if the goal is unreachable on the grid."""
    free, xs, ys = occupancy(scenario, resolution, extra_obstacles)
    R = resolution
    hx = xs[1] - xs[0]
    hy = ys[1] - ys[0]
    hd = math.hypot(hx, hy)
    idx = np.arange(R * R).reshape(R, R)

    rows, cols, data = [], [], []

    def link(src_mask, si, sj, di, dj, w):
        rows.append(idx[si, sj][src_mask].ravel())
        cols.append(idx[di, dj][src_mask].ravel())
        data.append(np.full(int(np.count_nonzero(src_mask)), w))

    s_e = np.s_[:, :-1]
    d_e = np.s_[:, 1:]
    s_n = np.s_[:-1, :]
    d_n = np.s_[1:, :]
    m = free[s_e] & free[d_e]
    link(m, *s_e, *d_e, hy)
    link(m, *d_e, *s_e, hy)
    m = free[s_n] & free[d_n]
    link(m, *s_n, *d_n, hx)
    link(m, *d_n, *s_n, hx)
    # diagonals, with the no-corner-cutting rule
    s_d = np.s_[:-1, :-1]
    d_d = np.s_[1:, 1:]
    m = free[s_d] & free[d_d] & free[np.s_[1:, :-1]] & free[np.s_[:-1, 1:]]
    link(m, *s_d, *d_d, hd)
    link(m, *d_d, *s_d, hd)
    s_a = np.s_[1:, :-1]
    d_a = np.s_[:-1, 1:]
    m = free[s_a] & free[d_a] & free[np.s_[:-1, :-1]] & free[np.s_[1:, 1:]]
    link(m, *s_a, *d_a, hd)
    link(m, *d_a, *s_a, hd)

    graph = csr_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                       shape=(R * R, R * R))

    sp = scenario.space
    (x0, _), (y0, _) = sp.bounds[0], sp.bounds[1]
    si = min(R - 1, max(0, int((scenario.start[0] - x0) / hx)))
    sj = min(R - 1, max(0, int((scenario.start[1] - y0) / hy)))
    if not free[si, sj]:
        fi, fj = np.nonzero(free)
        k = int(np.argmin((xs[fi] - scenario.start[0]) ** 2 + (ys[fj] - scenario.start[1]) ** 2))
        si, sj = int(fi[k]), int(fj[k])
    dist = sparse_dijkstra(graph, directed=True, indices=idx[si, sj])

    gx, gy = scenario.goal.center[0], scenario.goal.center[1]
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    in_ball = ((X - gx) ** 2 + (Y - gy) ** 2 <= scenario.goal.radius ** 2) & free
    if not in_ball.any():
        raise ValueError("no free grid cell inside the goal region")
    best = float(np.min(dist[idx[in_ball]]))
    if math.isinf(best):
        raise ValueError("goal region unreachable on the oracle grid")
    return best
