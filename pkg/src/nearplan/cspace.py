"""Configuration spaces for planar robots: metrics, steering, sampling and
collision checking.

A configuration is a plain float64 numpy array of length ``d``.  Coordinates
are tagged per-space as Euclidean (workspace units) or Angular (radians,
normalized into ``[0, 2*pi)``).  The metric is a weighted Euclidean distance
where angular differences are wrapped to ``[-pi, pi]`` and scaled by
``w_theta`` (length units per radian).

Obstacles are closed sets: touching an obstacle boundary counts as a
collision.  The workspace bounding box is a closed set of valid positions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

#: Rejection-sampling cap before sample_free gives up on a scenario.
MAX_SAMPLE_REJECTIONS = 10**6


class CSpaceError(ValueError):
    """Invalid configuration-space input (bad dimension, malformed file, ...)."""


class NoFreeSpaceError(RuntimeError):
    """Rejection sampling exceeded its cap without finding a free configuration."""


class CheckCounters:
    """Mutable tally of collision primitives, shared across a planner run."""

    __slots__ = ("config_checks", "motion_checks")

    def __init__(self) -> None:
        self.config_checks = 0
        self.motion_checks = 0


@dataclass(frozen=True)
class SpaceDefinition:
    """Geometry of the configuration space itself.

    tags holds one character per coordinate: "e" (Euclidean) or "a"
    (Angular).  bounds is a (d, 2) array of lower/upper limits; entries for
    angular coordinates are ignored (their domain is always [0, 2*pi)).
    """

    dimension: int
    tags: tuple[str, ...]
    bounds: np.ndarray
    w_theta: float = 1.0

    # derived, filled in __post_init__
    euclid_idx: np.ndarray = field(init=False, repr=False, compare=False)
    angular_idx: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        d = self.dimension
        if d < 2:
            raise CSpaceError(f"space dimension must be >= 2, got {d}")
        if len(self.tags) != d:
            raise CSpaceError("tags length must equal dimension")
        if any(t not in ("e", "a") for t in self.tags):
            raise CSpaceError(f"coordinate tags must be 'e' or 'a', got {self.tags}")
        if sum(1 for t in self.tags if t == "a") > 1:
            raise CSpaceError("at most one angular coordinate is supported")
        bounds = np.asarray(self.bounds, dtype=float)
        if bounds.shape != (d, 2):
            raise CSpaceError(f"bounds must have shape ({d}, 2)")
        object.__setattr__(self, "bounds", bounds)
        for i, t in enumerate(self.tags):
            if t == "e":
                lo, hi = bounds[i]
                if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                    raise CSpaceError(f"bounds[{i}] must be finite with lo < hi")
        if not (self.w_theta > 0 and np.isfinite(self.w_theta)):
            raise CSpaceError("w_theta must be positive and finite")
        eidx = np.array([i for i, t in enumerate(self.tags) if t == "e"], dtype=int)
        aidx = np.array([i for i, t in enumerate(self.tags) if t == "a"], dtype=int)
        object.__setattr__(self, "euclid_idx", eidx)
        object.__setattr__(self, "angular_idx", aidx)

    @property
    def has_angular(self) -> bool:
        return self.angular_idx.size > 0


def euclidean_space(bounds: Sequence[Sequence[float]]) -> SpaceDefinition:
    """All-Euclidean space for the given per-coordinate bounds."""
    b = np.asarray(bounds, dtype=float)
    return SpaceDefinition(dimension=b.shape[0], tags=("e",) * b.shape[0], bounds=b)


def se2_space(xy_bounds: Sequence[Sequence[float]], w_theta: float) -> SpaceDefinition:
    """Planar position plus one angular coordinate."""
    b = np.asarray(xy_bounds, dtype=float)
    if b.shape != (2, 2):
        raise CSpaceError("se2_space expects bounds for exactly the two position coordinates")
    bounds = np.vstack([b, [0.0, TWO_PI]])
    return SpaceDefinition(dimension=3, tags=("e", "e", "a"), bounds=bounds, w_theta=w_theta)


def normalize(space: SpaceDefinition, q: np.ndarray) -> np.ndarray:
    """Copy of q with angular coordinates wrapped into [0, 2*pi)."""
    q = np.array(q, dtype=float)
    if q.shape != (space.dimension,):
        raise CSpaceError(f"configuration must have shape ({space.dimension},), got {q.shape}")
    for i in space.angular_idx:
        q[i] = q[i] % TWO_PI
        if q[i] >= TWO_PI:  # q[i] % 2pi can round up to 2pi for tiny negatives
            q[i] = 0.0
    return q


def validate_config(space: SpaceDefinition, q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (space.dimension,):
        raise CSpaceError(f"configuration must have shape ({space.dimension},), got {q.shape}")
    if not np.all(np.isfinite(q)):
        raise CSpaceError("configuration coordinates must be finite")
    return q


def _wrap_pi(delta: np.ndarray) -> np.ndarray:
    """Wrap angle differences into [-pi, pi]."""
    return (delta + math.pi) % TWO_PI - math.pi


def distance(space: SpaceDefinition, a: np.ndarray, b: np.ndarray) -> float:
    """Metric distance: Euclidean over "e" coordinates, shortest-arc (scaled
    by w_theta) over the angular coordinate."""
    a = validate_config(space, a)
    b = validate_config(space, b)
    diff = a - b
    total = 0.0
    for i in space.euclid_idx:
        total += diff[i] * diff[i]
    for i in space.angular_idx:
        w = space.w_theta * float(_wrap_pi(np.array([diff[i]]))[0])
        total += w * w
    return math.sqrt(total)


def distances_to(space: SpaceDefinition, points: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorized metric distance from every row of points to q."""
    diff = points - q
    sq = np.zeros(points.shape[0])
    if space.euclid_idx.size:
        de = diff[:, space.euclid_idx]
        sq += np.einsum("ij,ij->i", de, de)
    for i in space.angular_idx:
        da = space.w_theta * _wrap_pi(diff[:, i])
        sq += da * da
    return np.sqrt(sq)


def interpolate(space: SpaceDefinition, a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    """Point at parameter t in [0, 1] along the geodesic from a to b."""
    if not (0.0 <= t <= 1.0):
        raise CSpaceError(f"interpolation parameter must be in [0, 1], got {t}")
    a = validate_config(space, a)
    b = validate_config(space, b)
    out = a + t * (b - a)
    for i in space.angular_idx:
        da = float(_wrap_pi(np.array([b[i] - a[i]]))[0])
        out[i] = (a[i] + t * da) % TWO_PI
        if out[i] >= TWO_PI:
            out[i] = 0.0
    return out


def steer(space: SpaceDefinition, from_q: np.ndarray, toward: np.ndarray, eta: float) -> np.ndarray:
    """Move from from_q toward toward, truncating the motion at length eta."""
    if eta <= 0:
        raise CSpaceError("steer step eta must be positive")
    d = distance(space, from_q, toward)
    if d == 0.0:
        raise CSpaceError("steer requires distinct endpoints")
    if d <= eta:
        return normalize(space, toward)
    return interpolate(space, from_q, toward, eta / d)


# ---------------------------------------------------------------------------
# robots, obstacles, scenarios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RobotModel:
    """Point, disc or rigid-polygon robot.

    Polygon vertices are given in the body frame, counterclockwise.  A
    polygon robot in a 2-dof space keeps a fixed orientation; with an SE(2)
    space the third coordinate rotates it.
    """

    kind: str  # "point" | "disc" | "polygon"
    radius: float = 0.0
    vertices: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.kind not in ("point", "disc", "polygon"):
            raise CSpaceError(f"unknown robot kind {self.kind!r}")
        if self.kind == "disc" and not self.radius > 0:
            raise CSpaceError("disc robot needs radius > 0")
        if self.kind == "polygon":
            v = np.asarray(self.vertices, dtype=float)
            if v.ndim != 2 or v.shape[0] < 3 or v.shape[1] != 2:
                raise CSpaceError("polygon robot needs >= 3 planar vertices")
            if _polygon_self_intersects(v):
                raise CSpaceError("polygon robot must be simple (non-self-intersecting)")
            object.__setattr__(self, "vertices", v)

    def circumradius(self) -> float:
        if self.kind == "point":
            return 0.0
        if self.kind == "disc":
            return self.radius
        return float(np.max(np.hypot(self.vertices[:, 0], self.vertices[:, 1])))


@dataclass(frozen=True)
class GoalRegion:
    """Metric ball around a goal configuration."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise CSpaceError("goal radius must be positive")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))


class _ObstacleSet:
    """Obstacle polygons preprocessed into flat edge arrays so point and
    segment queries run as single vectorized passes over all edges."""

    def __init__(self, polygons: Sequence[np.ndarray]):
        self.polys: list[np.ndarray] = []
        edges_a, edges_b, starts = [], [], []
        k = 0
        for poly in polygons:
            p = np.asarray(poly, dtype=float)
            if p.ndim != 2 or p.shape[0] < 3 or p.shape[1] != 2:
                raise CSpaceError("obstacle polygons need >= 3 planar vertices")
            if _polygon_self_intersects(p):
                raise CSpaceError("obstacle polygons must be simple")
            self.polys.append(p)
            edges_a.append(p)
            edges_b.append(np.roll(p, -1, axis=0))
            starts.append(k)
            k += p.shape[0]
        if self.polys:
            self.edge_a = np.vstack(edges_a)
            self.edge_b = np.vstack(edges_b)
        else:
            self.edge_a = np.zeros((0, 2))
            self.edge_b = np.zeros((0, 2))
        self.poly_starts = np.array(starts, dtype=np.intp)
        a, b = self.edge_a, self.edge_b
        self.ax, self.ay = a[:, 0].copy(), a[:, 1].copy()
        self.bx, self.by = b[:, 0].copy(), b[:, 1].copy()
        self.sx, self.sy = self.bx - self.ax, self.by - self.ay
        # reciprocal of edge y-span; only consulted where the span is nonzero
        with np.errstate(divide="ignore"):
            inv = 1.0 / self.sy
        self.inv_sy = np.where(self.sy != 0.0, inv, 0.0)
        self.minx = np.minimum(self.ax, self.bx)
        self.maxx = np.maximum(self.ax, self.bx)
        self.miny = np.minimum(self.ay, self.by)
        self.maxy = np.maximum(self.ay, self.by)
        self.seg_len2 = self.sx * self.sx + self.sy * self.sy

    def __len__(self) -> int:
        return len(self.polys)

    def point_blocked(self, px: float, py: float) -> bool:
        """Is the point on or inside any obstacle polygon?"""
        if not self.polys:
            return False
        relx = px - self.ax
        rely = py - self.ay
        cross = self.sx * rely - self.sy * relx
        on = ((cross == 0.0) & (self.minx <= px) & (px <= self.maxx)
              & (self.miny <= py) & (py <= self.maxy))
        if on.any():
            return True
        straddle = (self.ay > py) != (self.by > py)
        xint = self.ax + (py - self.ay) * self.sx * self.inv_sy
        hits = straddle & (xint > px)
        return bool(np.bitwise_xor.reduceat(hits, self.poly_starts).any())

    def min_distance(self, px: float, py: float) -> float:
        """Distance from the point to the nearest obstacle edge."""
        if not self.polys:
            return math.inf
        relx = px - self.ax
        rely = py - self.ay
        t = relx * self.sx + rely * self.sy
        np.clip(t, 0.0, self.seg_len2, out=t)
        with np.errstate(invalid="ignore"):
            t = np.where(self.seg_len2 > 0.0, t / self.seg_len2, 0.0)
        dx = relx - t * self.sx
        dy = rely - t * self.sy
        return float(np.sqrt(np.min(dx * dx + dy * dy)))


@dataclass
class Scenario:
    """A motion-planning problem: space, robot, obstacles, start, goal."""

    name: str
    space: SpaceDefinition
    robot: RobotModel
    obstacles: list[np.ndarray]
    start: np.ndarray
    goal: GoalRegion
    best_known: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._obs = _ObstacleSet(self.obstacles)
        self.start = normalize(self.space, validate_config(self.space, self.start))
        validate_config(self.space, self.goal.center)
        if self.robot.kind == "polygon" and self.space.dimension not in (2, 3):
            raise CSpaceError("polygon robots are supported in 2-dof or SE(2) spaces")
        if not collision_free_config(self, self.start):
            raise CSpaceError("start configuration is in collision")
        lo, hi = self.space.bounds[:, 0], self.space.bounds[:, 1]
        c = self.goal.center
        for i in self.space.euclid_idx:
            if c[i] + self.goal.radius < lo[i] or c[i] - self.goal.radius > hi[i]:
                raise CSpaceError("goal region does not intersect the bounding box")

    def bbox_diagonal(self) -> float:
        span = self.space.bounds[self.space.euclid_idx, 1] - self.space.bounds[self.space.euclid_idx, 0]
        total = float(np.dot(span, span))
        if self.space.has_angular:
            total += (math.pi * self.space.w_theta) ** 2
        return math.sqrt(total)

    def default_delta(self) -> float:
        """Motion-validation resolution: 1% of the bounding-box diagonal."""
        return 0.01 * self.bbox_diagonal()


# ---------------------------------------------------------------------------
# low-level planar geometry
# ---------------------------------------------------------------------------


def _on_segment(ax, ay, bx, by, px, py) -> bool:
    """Is p on the closed segment ab?  Exact for exactly-collinear inputs."""
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0.0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def _point_in_polygon(poly: np.ndarray, px: float, py: float) -> bool:
    """Point in the closed polygon (boundary included)."""
    x, y = poly[:, 0], poly[:, 1]
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    # boundary test first; crossing-number is half-open and unreliable on edges
    cross = (x2 - x) * (py - y) - (y2 - y) * (px - x)
    on = (cross == 0.0) & (np.minimum(x, x2) <= px) & (px <= np.maximum(x, x2)) \
        & (np.minimum(y, y2) <= py) & (py <= np.maximum(y, y2))
    if bool(np.any(on)):
        return True
    straddle = (y > py) != (y2 > py)
    if not np.any(straddle):
        return False
    xs = x[straddle] + (py - y[straddle]) * (x2[straddle] - x[straddle]) / (y2[straddle] - y[straddle])
    return bool(np.count_nonzero(xs > px) % 2 == 1)


def _segments_intersect_any(edge_a: np.ndarray, edge_b: np.ndarray, p: np.ndarray, q: np.ndarray) -> bool:
    """Does segment pq touch or cross any of the stacked edges?  Vectorized
    orientation tests; collinear overlaps count as intersections."""
    if edge_a.shape[0] == 0:
        return False
    r = q - p
    d1x = edge_a[:, 0] - p[0]
    d1y = edge_a[:, 1] - p[1]
    d2x = edge_b[:, 0] - p[0]
    d2y = edge_b[:, 1] - p[1]
    o1 = r[0] * d1y - r[1] * d1x  # orient(p, q, a)
    o2 = r[0] * d2y - r[1] * d2x  # orient(p, q, b)
    s = edge_b - edge_a
    e1x = p[0] - edge_a[:, 0]
    e1y = p[1] - edge_a[:, 1]
    e2x = q[0] - edge_a[:, 0]
    e2y = q[1] - edge_a[:, 1]
    o3 = s[:, 0] * e1y - s[:, 1] * e1x  # orient(a, b, p)
    o4 = s[:, 0] * e2y - s[:, 1] * e2x  # orient(a, b, q)
    proper = (((o1 > 0) & (o2 < 0)) | ((o1 < 0) & (o2 > 0))) \
        & (((o3 > 0) & (o4 < 0)) | ((o3 < 0) & (o4 > 0)))
    if bool(np.any(proper)):
        return True
    # degenerate contacts: some orientation is exactly zero
    degen = np.flatnonzero((o1 == 0) | (o2 == 0) | (o3 == 0) | (o4 == 0))
    for k in degen:
        ax, ay = edge_a[k]
        bx, by = edge_b[k]
        if o1[k] == 0 and _on_segment(p[0], p[1], q[0], q[1], ax, ay):
            return True
        if o2[k] == 0 and _on_segment(p[0], p[1], q[0], q[1], bx, by):
            return True
        if o3[k] == 0 and _on_segment(ax, ay, bx, by, p[0], p[1]):
            return True
        if o4[k] == 0 and _on_segment(ax, ay, bx, by, q[0], q[1]):
            return True
    return False


def _segment_distances(edge_a: np.ndarray, edge_b: np.ndarray, px: float, py: float) -> np.ndarray:
    """Distance from point to every stacked segment."""
    d = edge_b - edge_a
    w0 = np.array([px, py]) - edge_a
    denom = np.einsum("ij,ij->i", d, d)
    t = np.zeros(len(edge_a))
    nz = denom > 0
    t[nz] = np.clip(np.einsum("ij,ij->i", w0[nz], d[nz]) / denom[nz], 0.0, 1.0)
    closest = edge_a + t[:, None] * d
    return np.hypot(closest[:, 0] - px, closest[:, 1] - py)


def _polygon_self_intersects(poly: np.ndarray) -> bool:
    n = poly.shape[0]
    for i in range(n):
        a1, a2 = poly[i], poly[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared-vertex neighbours
            b1, b2 = poly[j], poly[(j + 1) % n]
            if _segments_intersect_any(b1[None, :], b2[None, :], a1, a2):
                return True
    return False


def _robot_polygon(scenario: Scenario, q: np.ndarray) -> np.ndarray:
    verts = scenario.robot.vertices
    if scenario.space.has_angular:
        theta = q[int(scenario.space.angular_idx[0])]
        c, s = math.cos(theta), math.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        verts = verts @ rot.T
    return verts + q[:2]


# ---------------------------------------------------------------------------
# collision queries
# ---------------------------------------------------------------------------


def collision_free_config(scenario: Scenario, q: np.ndarray,
                          counters: Optional[CheckCounters] = None) -> bool:
    """Is the robot at q inside the bounding box and clear of every obstacle?

    Obstacle boundaries count as collisions.
    """
    if counters is not None:
        counters.config_checks += 1
    space = scenario.space
    lo, hi = space.bounds[:, 0], space.bounds[:, 1]
    obs = scenario._obs
    kind = scenario.robot.kind

    if kind == "point":
        for i in space.euclid_idx:
            if not (lo[i] <= q[i] <= hi[i]):
                return False
        return not obs.point_blocked(float(q[0]), float(q[1]))

    if kind == "disc":
        r = scenario.robot.radius
        for i in space.euclid_idx:
            if not (lo[i] + r <= q[i] <= hi[i] - r):
                return False
        px, py = float(q[0]), float(q[1])
        if obs.point_blocked(px, py):
            return False
        return obs.min_distance(px, py) > r

    # polygon robot
    rv = _robot_polygon(scenario, q)
    if np.any(rv[:, 0] < lo[0]) or np.any(rv[:, 0] > hi[0]) \
            or np.any(rv[:, 1] < lo[1]) or np.any(rv[:, 1] > hi[1]):
        return False
    ra = rv
    rb = np.roll(rv, -1, axis=0)
    for poly in obs.polys:
        for k in range(ra.shape[0]):
            if _segments_intersect_any(poly, np.roll(poly, -1, axis=0), ra[k], rb[k]):
                return False
        if _point_in_polygon(poly, rv[0, 0], rv[0, 1]):
            return False
        if _point_in_polygon(rv, poly[0, 0], poly[0, 1]):
            return False
    return True


def _bisect_motion(scenario: Scenario, a: np.ndarray, b: np.ndarray, delta: float,
                   counters: Optional[CheckCounters]) -> bool:
    if distance(scenario.space, a, b) <= delta:
        return True
    mid = interpolate(scenario.space, a, b, 0.5)
    if not collision_free_config(scenario, mid, counters):
        return False
    return _bisect_motion(scenario, a, mid, delta, counters) \
        and _bisect_motion(scenario, mid, b, delta, counters)


def collision_free_motion(scenario: Scenario, a: np.ndarray, b: np.ndarray,
                          delta: Optional[float] = None,
                          counters: Optional[CheckCounters] = None) -> bool:
    """Is the straight-line (geodesic) motion from a to b collision-free?

    Point robots get an exact segment-versus-polygon test; disc and polygon
    robots are validated by recursive bisection down to resolution delta.
    """
    if counters is not None:
        counters.motion_checks += 1
    if scenario.robot.kind == "point":
        if not collision_free_config(scenario, a, counters):
            return False
        if not collision_free_config(scenario, b, counters):
            return False
        obs = scenario._obs
        return not _segments_intersect_any(obs.edge_a, obs.edge_b, a[:2], b[:2])
    if delta is None:
        delta = scenario.default_delta()
    if delta <= 0:
        raise CSpaceError("motion-check resolution delta must be positive")
    if not collision_free_config(scenario, a, counters):
        return False
    if not collision_free_config(scenario, b, counters):
        return False
    return _bisect_motion(scenario, a, b, delta, counters)


def collision_free_motions_from(scenario: Scenario, base: np.ndarray,
                                targets: np.ndarray,
                                delta: Optional[float] = None,
                                counters: Optional[CheckCounters] = None) -> np.ndarray:
    """Batched collision_free_motion from one base configuration to many
    targets.  All endpoints must already be known collision-free (they are
    roadmap vertices); results match the scalar test exactly.

    Point robots get a single vectorized segment-versus-edges pass with a
    scalar fallback on degenerate (touching/collinear) rows; other robots
    fall back to per-target checks.
    """
    targets = np.asarray(targets, dtype=float)
    m = targets.shape[0]
    if counters is not None:
        counters.motion_checks += m
    if m == 0:
        return np.zeros(0, dtype=bool)
    if scenario.robot.kind != "point":
        if delta is None:
            delta = scenario.default_delta()
        out = np.empty(m, dtype=bool)
        for i in range(m):
            out[i] = _bisect_motion(scenario, base, targets[i], delta, counters)
        return out
    obs = scenario._obs
    if not obs.polys:
        return np.ones(m, dtype=bool)
    px, py = float(base[0]), float(base[1])
    rx = targets[:, 0:1] - px
    ry = targets[:, 1:2] - py
    d1x = obs.ax[None, :] - px
    d1y = obs.ay[None, :] - py
    d2x = obs.bx[None, :] - px
    d2y = obs.by[None, :] - py
    o1 = rx * d1y - ry * d1x
    o2 = rx * d2y - ry * d2x
    o3 = (obs.sx * (py - obs.ay) - obs.sy * (px - obs.ax))[None, :]
    o4 = obs.sx[None, :] * (targets[:, 1:2] - obs.ay[None, :]) \
        - obs.sy[None, :] * (targets[:, 0:1] - obs.ax[None, :])
    proper = (((o1 > 0) & (o2 < 0)) | ((o1 < 0) & (o2 > 0))) \
        & (((o3 > 0) & (o4 < 0)) | ((o3 < 0) & (o4 > 0)))
    blocked = proper.any(axis=1)
    degen = (((o1 == 0) | (o2 == 0) | (o3 == 0) | (o4 == 0)).any(axis=1)) & ~blocked
    for i in np.flatnonzero(degen):
        blocked[i] = _segments_intersect_any(obs.edge_a, obs.edge_b, base[:2], targets[i, :2])
    return ~blocked


def sample_free(scenario: Scenario, rng: np.random.Generator,
                counters: Optional[CheckCounters] = None,
                max_rejections: int = MAX_SAMPLE_REJECTIONS) -> np.ndarray:
    """Uniform rejection sampling over the free space."""
    space = scenario.space
    lo, hi = space.bounds[:, 0].copy(), space.bounds[:, 1].copy()
    for i in space.angular_idx:
        lo[i], hi[i] = 0.0, TWO_PI
    for _ in range(max_rejections):
        q = lo + rng.random(space.dimension) * (hi - lo)
        if collision_free_config(scenario, q, counters):
            return q
    raise NoFreeSpaceError(
        f"no free configuration found in {max_rejections} draws for scenario {scenario.name!r}")


def sample_in_goal(scenario: Scenario, rng: np.random.Generator,
                   max_rejections: int = MAX_SAMPLE_REJECTIONS) -> np.ndarray:
    """Uniform sample inside the goal ball (clipped to the bounding box).

    Used for goal biasing; the sample is a steering target and is not
    required to be collision-free.
    """
    space = scenario.space
    goal = scenario.goal
    c, r = goal.center, goal.radius
    lo = np.empty(space.dimension)
    hi = np.empty(space.dimension)
    for i in range(space.dimension):
        if space.tags[i] == "e":
            lo[i] = max(space.bounds[i, 0], c[i] - r)
            hi[i] = min(space.bounds[i, 1], c[i] + r)
        else:
            half = min(math.pi, r / space.w_theta)
            lo[i], hi[i] = c[i] - half, c[i] + half
    for _ in range(max_rejections):
        q = lo + rng.random(space.dimension) * (hi - lo)
        q = normalize(space, q)
        if distance(space, q, c) <= r:
            return q
    raise NoFreeSpaceError("goal region does not intersect the bounding box")


def in_goal(scenario: Scenario, q: np.ndarray) -> bool:
    return distance(scenario.space, q, scenario.goal.center) <= scenario.goal.radius


# ---------------------------------------------------------------------------
# scenario files
# ---------------------------------------------------------------------------


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise CSpaceError(f"scenario field missing: {where}{key}")
    return doc[key]


def _finite(value, where: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise CSpaceError(f"scenario field {where} must be finite, got {value!r}")
    return v


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a Scenario from the JSON document structure."""
    name = str(_require(doc, "name", ""))
    sp = _require(doc, "space", "")
    d = int(_require(sp, "dimension", "space."))
    tags = tuple(_require(sp, "tags", "space."))
    raw_bounds = _require(sp, "bounds", "space.")
    if len(raw_bounds) != d:
        raise CSpaceError("space.bounds must list one [lo, hi] pair per coordinate")
    bounds = np.zeros((d, 2))
    for i, entry in enumerate(raw_bounds):
        if entry is None:
            if i < len(tags) and tags[i] == "a":
                bounds[i] = (0.0, TWO_PI)
                continue
            raise CSpaceError(f"space.bounds[{i}] may be null only for angular coordinates")
        bounds[i] = (_finite(entry[0], f"space.bounds[{i}][0]"),
                     _finite(entry[1], f"space.bounds[{i}][1]"))

    rb = _require(doc, "robot", "")
    kind = _require(rb, "type", "robot.")
    if kind == "point":
        robot = RobotModel("point")
    elif kind == "disc":
        robot = RobotModel("disc", radius=_finite(_require(rb, "radius", "robot."), "robot.radius"))
    elif kind == "polygon":
        verts = np.array([[_finite(x, "robot.vertices"), _finite(y, "robot.vertices")]
                          for x, y in _require(rb, "vertices", "robot.")])
        robot = RobotModel("polygon", vertices=verts)
    else:
        raise CSpaceError(f"robot.type must be point|disc|polygon, got {kind!r}")

    w_theta = sp.get("w_theta")
    if w_theta is None:
        w_theta = robot.circumradius() or 1.0
    space = SpaceDefinition(dimension=d, tags=tags, bounds=bounds,
                            w_theta=_finite(w_theta, "space.w_theta"))

    obstacles = []
    for j, poly in enumerate(doc.get("obstacles", [])):
        obstacles.append(np.array([[_finite(x, f"obstacles[{j}]"), _finite(y, f"obstacles[{j}]")]
                                   for x, y in poly]))
    start = np.array([_finite(v, "start") for v in _require(doc, "start", "")])
    g = _require(doc, "goal", "")
    goal = GoalRegion(center=np.array([_finite(v, "goal.center") for v in _require(g, "center", "goal.")]),
                      radius=_finite(_require(g, "radius", "goal."), "goal.radius"))
    best_known = doc.get("best_known")
    if best_known is not None:
        best_known = _finite(best_known, "best_known")
    return Scenario(name=name, space=space, robot=robot, obstacles=obstacles,
                    start=start, goal=goal, best_known=best_known,
                    meta=dict(doc.get("meta", {})))


def scenario_to_dict(scenario: Scenario) -> dict:
    sp = scenario.space
    bounds = []
    for i in range(sp.dimension):
        bounds.append(None if sp.tags[i] == "a" else [float(sp.bounds[i, 0]), float(sp.bounds[i, 1])])
    robot: dict = {"type": scenario.robot.kind}
    if scenario.robot.kind == "disc":
        robot["radius"] = scenario.robot.radius
    if scenario.robot.kind == "polygon":
        robot["vertices"] = scenario.robot.vertices.tolist()
    doc = {
        "name": scenario.name,
        "space": {"dimension": sp.dimension, "tags": list(sp.tags),
                  "bounds": bounds, "w_theta": sp.w_theta},
        "robot": robot,
        "obstacles": [p.tolist() for p in scenario.obstacles],
        "start": scenario.start.tolist(),
        "goal": {"center": scenario.goal.center.tolist(), "radius": scenario.goal.radius},
    }
    if scenario.best_known is not None:
        doc["best_known"] = scenario.best_known
    if scenario.meta:
        doc["meta"] = scenario.meta
    return doc


def load_scenario(path) -> Scenario:
    """Parse a scenario JSON file; malformed input raises CSpaceError."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise CSpaceError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise CSpaceError(f"{path}: scenario document must be a JSON object")
    try:
        return scenario_from_dict(doc)
    except CSpaceError as exc:
        raise CSpaceError(f"{path}: {exc}") from exc


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2)
        fh.write("\n")


def _reject_constant(token: str):
    raise CSpaceError(f"non-finite number {token!r} is not permitted in scenario files")
