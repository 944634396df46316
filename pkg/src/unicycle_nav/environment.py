"""Free space of a disk robot among polygonal obstacles and clearance of predicted motion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geometry as geo
from .geometry import Point2, Polygon, Region


class InvalidEnvironment(ValueError):
    """An environment violates a load-time rule; ``rule`` names it."""

    def __init__(self, rule: str, message: str):
        super().__init__(message)
        self.rule = rule


@dataclass(frozen=True)
class ClearanceReport:
    sigma: float
    witness_region_point: Point2 | None
    witness_boundary_point: Point2 | None


@dataclass(frozen=True)
class Environment:
    workspace: Polygon
    obstacles: tuple[Polygon, ...]
    robot_radius: float
    _seg_a: np.ndarray = field(init=False, repr=False, compare=False)
    _seg_b: np.ndarray = field(init=False, repr=False, compare=False)
    _seg_poly: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.robot_radius > 0.0:
            raise InvalidEnvironment("robot_radius", "robot_radius must be positive")
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        starts, ends, ids = [], [], []
        for i, poly in enumerate((self.workspace, *self.obstacles)):
            a, b = poly.edges()
            starts.append(a)
            ends.append(b)
            ids.append(np.full(len(a), i))
        object.__setattr__(self, "_seg_a", np.vstack(starts))
        object.__setattr__(self, "_seg_b", np.vstack(ends))
        object.__setattr__(self, "_seg_poly", np.concatenate(ids))

    @classmethod
    def from_vertices(cls, workspace: Sequence[Sequence[float]],
                      obstacles: Sequence[Sequence[Sequence[float]]], robot_radius: float) -> "Environment":
        return cls(Polygon.from_vertices(workspace),
                   tuple(Polygon.from_vertices(o) for o in obstacles), float(robot_radius))

    @property
    def boundary_segments(self) -> tuple[np.ndarray, np.ndarray]:
        return self._seg_a, self._seg_b

    def validate(self) -> None:
        """Reject layouts whose gaps are narrower than the robot but not closed.

        Obstacles may touch each other or the workspace boundary; any gap that
        is open must be wider than the robot diameter.
        """
        x0, y0, x1, y1 = self.workspace.bounds()
        for i, obs in enumerate(self.obstacles):
            ox0, oy0, ox1, oy1 = obs.bounds()
            if ox0 < x0 or oy0 < y0 or ox1 > x1 or oy1 > y1:
                raise InvalidEnvironment("obstacle-in-workspace",
                                         f"obstacle {i} extends beyond the workspace bounding box")
        width = 2.0 * self.robot_radius
        polys = [("workspace", self.workspace)] + [(f"obstacle {i}", o) for i, o in enumerate(self.obstacles)]
        for i in range(1, len(polys)):
            for j in range(i):
                gap = _polygon_gap(polys[i][1], polys[j][1])
                if 1e-9 < gap <= width:
                    raise InvalidEnvironment(
                        "corridor-width",
                        f"gap of {gap:.6g} m between {polys[j][0]} and {polys[i][0]} "
                        f"is narrower than the robot diameter {width:.6g} m")

    # -- point queries ---------------------------------------------------

    def obstacle_distance(self, p: Point2) -> float:
        """Distance from ``p`` to the nearest workspace or obstacle edge."""
        pt = np.asarray(p, dtype=float)
        return float(geo._pt_seg_dist(pt, self._seg_a, self._seg_b).min())

    def obstacle_distances(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d = geo._pt_seg_dist(pts[:, None, :], self._seg_a[None], self._seg_b[None])
        return d.min(axis=1)

    def _inside_flags(self, pts: np.ndarray) -> np.ndarray:
        """(n, 1 + n_obstacles) even-odd membership of each point in each polygon."""
        a, b = self._seg_a, self._seg_b
        py = pts[:, 1:2]
        straddle = (a[None, :, 1] > py) != (b[None, :, 1] > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = a[:, 0] + (py - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1])
        hits = (straddle & (pts[:, 0:1] < x_cross)).astype(np.int64)
        n_poly = len(self.obstacles) + 1
        counts = np.zeros((len(pts), n_poly), dtype=np.int64)
        for j in range(n_poly):
            counts[:, j] = hits[:, self._seg_poly == j].sum(axis=1)
        return counts % 2 == 1

    def in_free_space(self, p: Point2) -> bool:
        return bool(self.in_free_space_points(np.asarray([p], dtype=float))[0])

    def in_free_space_points(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        flags = self._inside_flags(pts)
        ok = flags[:, 0] & ~flags[:, 1:].any(axis=1)
        return ok & (self.obstacle_distances(pts) > self.robot_radius)

    def boundary_distance(self, p: Point2) -> float:
        """Distance from ``p`` to the free-space boundary; 0 outside the free space."""
        pts = np.asarray([p], dtype=float)
        flags = self._inside_flags(pts)[0]
        if not flags[0] or flags[1:].any():
            return 0.0
        return max(0.0, self.obstacle_distance(p) - self.robot_radius)

    # -- region queries --------------------------------------------------

    def safety_level(self, region: Region, robot_pos: Point2) -> float:
        """Clearance of ``region`` from the free-space boundary (0 if the robot is not free)."""
        if not self.in_free_space(robot_pos):
            return 0.0
        d = geo.segment_distances(region, self._seg_a, self._seg_b)
        return max(0.0, float(d.min()) - self.robot_radius)

    def region_clearance(self, region: Region, robot_pos: Point2) -> ClearanceReport:
        sigma = self.safety_level(region, robot_pos)
        if sigma == 0.0:
            return ClearanceReport(0.0, None, None)
        d = geo.segment_distances(region, self._seg_a, self._seg_b)
        k = int(np.argmin(d))
        region_pt, seg_pt = _closest_pair(region, self._seg_a[k], self._seg_b[k])
        gap = np.asarray(region_pt) - np.asarray(seg_pt)
        boundary_pt = np.asarray(seg_pt) + gap * (self.robot_radius / float(np.hypot(*gap)))
        return ClearanceReport(sigma, region_pt, (float(boundary_pt[0]), float(boundary_pt[1])))


def region_clearance(env: Environment, region: Region, robot_pos: Point2) -> ClearanceReport:
    return env.region_clearance(region, robot_pos)


def in_free_space(env: Environment, p: Point2) -> bool:
    return env.in_free_space(p)


def boundary_distance(env: Environment, p: Point2) -> float:
    return env.boundary_distance(p)


def _polygon_gap(p: Polygon, q: Polygon) -> float:
    pa, pb = p.edges()
    qa, qb = q.edges()
    d = geo._seg_seg_dist(pa[:, None, :], pb[:, None, :], qa[None], qb[None])
    return float(d.min())


def _closest_pair(region: Region, a: np.ndarray, b: np.ndarray) -> tuple[Point2, Point2]:
    """Nearest points between ``region`` and segment a-b.

    The nearest convex part is picked with the exact segment kernel, then the
    segment parameter is refined by ternary search on that part.
    """
    parts = geo._union_parts(region)
    if len(parts) > 1:
        d = [float(geo.segment_distances(p, a[None], b[None])[0]) for p in parts]
        part = parts[int(np.argmin(d))]
    else:
        part = parts[0]

    def f(t: float) -> float:
        return geo.point_distance(part, tuple(a + t * (b - a)))

    lo, hi = 0.0, 1.0
    for _ in range(100):
        if hi - lo <= 1e-12:
            break
        m1, m2 = lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    t = min((0.0, 1.0, 0.5 * (lo + hi)), key=f)
    seg_pt = tuple(float(c) for c in a + t * (b - a))
    return geo.project(part, seg_pt), seg_pt
