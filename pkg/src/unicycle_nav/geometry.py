"""Planar regions used for unicycle motion prediction and their distance queries.

Points are plain ``(x, y)`` float tuples. Every region in the family is either
convex or a finite union of convex parts, and all queries on unions reduce to
a min/OR over the parts (see :func:`convex_parts`).

Two routes are provided for segment distances:

* :func:`segment_distance` minimises :func:`point_distance` along the segment
  with a ternary search (the map is convex per convex part);
* :func:`segment_distances` is an exact, vectorised kernel over many segments
  at once and is what the clearance computations use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

Point2 = tuple[float, float]

DEFAULT_TOL = 1e-9
# relative slack when checking parameter invariants (radius <= distance etc.)
_INVARIANT_SLACK = 1e-9


def as_point(p: Sequence[float]) -> Point2:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite point {p!r}")
    return (x, y)


# ---------------------------------------------------------------------------
# Region types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    a: Point2
    b: Point2


@dataclass(frozen=True)
class Polygon:
    """Simple counterclockwise polygon with at least three vertices."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        verts = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        if signed_area(verts) <= 0.0:
            raise ValueError("polygon must be counterclockwise with nonzero area")
        if not _is_simple(verts):
            raise ValueError("polygon is self-intersecting")

    @classmethod
    def from_vertices(cls, vertices: Sequence[Sequence[float]]) -> "Polygon":
        """Build a polygon, reversing clockwise input."""
        verts = [as_point(v) for v in vertices]
        if len(verts) >= 3 and signed_area(verts) < 0.0:
            verts.reverse()
        return cls(tuple(verts))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.asarray(self.vertices, dtype=float)
        return a, np.roll(a, -1, axis=0)

    def bounds(self) -> tuple[float, float, float, float]:
        a = np.asarray(self.vertices)
        return (float(a[:, 0].min()), float(a[:, 1].min()),
                float(a[:, 0].max()), float(a[:, 1].max()))

    def contains_points(self, pts) -> np.ndarray:
        """Even-odd ray casting; boundary points may go either way."""
        a, b = self.edges()
        return crossing_parity(np.atleast_2d(np.asarray(pts, dtype=float)), a, b)


def crossing_parity(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Parity of edge crossings of a rightward ray from each point (even-odd rule)."""
    px = pts[:, 0:1]
    py = pts[:, 1:2]
    ax, ay = a[None, :, 0], a[None, :, 1]
    bx, by = b[None, :, 0], b[None, :, 1]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
    hits = straddle & (px < x_cross)
    return (np.count_nonzero(hits, axis=1) % 2) == 1


@dataclass(frozen=True)
class Ball:
    center: Point2
    radius: float

    def __post_init__(self) -> None:
        if not self.radius >= 0.0:
            raise ValueError("ball radius must be nonnegative")


@dataclass(frozen=True)
class HalfPlane:
    """``{z : (toward - anchor) . (z - anchor) >= 0}``; anchor == toward is the full plane."""

    anchor: Point2
    toward: Point2


@dataclass(frozen=True)
class SolidCone:
    """Cone with apex ``apex`` whose boundary rays are tangent to ``Ball(base, base_clearance)``."""

    apex: Point2
    base: Point2
    base_clearance: float

    def __post_init__(self) -> None:
        dist = math.dist(self.apex, self.base)
        if self.base_clearance < 0.0:
            raise ValueError("base_clearance must be nonnegative")
        if self.base_clearance > dist * (1.0 + _INVARIANT_SLACK) + _INVARIANT_SLACK:
            raise ValueError("base_clearance exceeds apex-base distance")


@dataclass(frozen=True)
class IceCreamCone:
    """Convex hull of ``apex`` and ``Ball(base, base_radius)``."""

    apex: Point2
    base: Point2
    base_radius: float

    def __post_init__(self) -> None:
        dist = math.dist(self.apex, self.base)
        if self.base_radius < 0.0:
            raise ValueError("base_radius must be nonnegative")
        if self.base_radius > dist * (1.0 + _INVARIANT_SLACK) + _INVARIANT_SLACK:
            raise ValueError("base_radius exceeds apex-base distance")


@dataclass(frozen=True)
class TruncatedIceCreamCone:
    """Right triangle ``(apex, base, foot)`` united with ``Ball(base, d)``.

    ``foot`` is the projection of ``base`` onto the heading line through
    ``apex`` and ``d = |base - foot|`` is the lateral offset of the base from
    that line.
    """

    apex: Point2
    base: Point2
    heading: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    def triangle(self) -> "Triangle":
        c, s = math.cos(self.heading), math.sin(self.heading)
        dx, dy = self.base[0] - self.apex[0], self.base[1] - self.apex[1]
        along = c * dx + s * dy
        foot = (self.apex[0] + along * c, self.apex[1] + along * s)
        return Triangle(self.apex, self.base, foot)

    def ball(self) -> Ball:
        c, s = math.cos(self.heading), math.sin(self.heading)
        dx, dy = self.base[0] - self.apex[0], self.base[1] - self.apex[1]
        return Ball(self.base, abs(-s * dx + c * dy))


@dataclass(frozen=True)
class BoundedCone:
    """Intersection of ``ball`` with ``cone`` (or just ``ball`` when cone is None).

    The cone apex must lie on the ball boundary and the cone must point at the
    ball center, which is how the bounded conic prediction is built.
    """

    ball: Ball
    cone: SolidCone | None = None

    def __post_init__(self) -> None:
        if self.cone is None:
            return
        if math.dist(self.cone.base, self.ball.center) > 1e-9 * (1.0 + self.ball.radius):
            raise ValueError("cone base must coincide with ball center")
        if abs(math.dist(self.cone.apex, self.ball.center) - self.ball.radius) > 1e-9 * (1.0 + self.ball.radius):
            raise ValueError("cone apex must lie on the ball boundary")


@dataclass(frozen=True)
class Triangle:
    a: Point2
    b: Point2
    c: Point2


@dataclass(frozen=True)
class Capsule:
    """Segment ``a``-``b`` inflated by ``pad``."""

    a: Point2
    b: Point2
    pad: float


@dataclass(frozen=True)
class PaddedPolyline:
    """Union of capsules around consecutive points (forward-simulation hull)."""

    points: tuple[Point2, ...]
    pad: float
    converged: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        pts = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 1:
            raise ValueError("polyline needs at least one point")
        if self.pad < 0.0:
            raise ValueError("pad must be nonnegative")


Region = Union[
    Ball, HalfPlane, SolidCone, IceCreamCone, TruncatedIceCreamCone, PaddedPolyline,
    BoundedCone, Triangle, Capsule,
]

CONVEX_TYPES = (Ball, HalfPlane, SolidCone, IceCreamCone, BoundedCone, Triangle, Capsule)


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def wrap_angle(a: float) -> float:
    """Wrap an angle into [-pi, pi)."""
    w = math.fmod(a + math.pi, 2.0 * math.pi)
    if w < 0.0:
        w += 2.0 * math.pi
    w -= math.pi
    # fmod rounding can land exactly on +pi
    return -math.pi if w >= math.pi else w


def signed_area(vertices: Sequence[Point2]) -> float:
    s = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _is_simple(verts: Sequence[Point2]) -> bool:
    n = len(verts)
    a = np.asarray(verts, dtype=float)
    b = np.roll(a, -1, axis=0)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent edges share a vertex
            d = _seg_seg_dist(a[i], b[i], a[j], b[j])
            if d <= 0.0:
                return False
    return True


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _dot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]


def _norm(u: np.ndarray) -> np.ndarray:
    return np.hypot(u[..., 0], u[..., 1])


def _closest_on_seg(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    ap = p - a
    denom = ab[..., 0] * ab[..., 0] + ab[..., 1] * ab[..., 1]
    num = ap[..., 0] * ab[..., 0] + ap[..., 1] * ab[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.minimum(np.maximum(num / denom, 0.0), 1.0)
    t = np.where(denom > 0.0, t, 0.0)
    return a + t[..., None] * ab


def _pt_seg_dist(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _norm(p - _closest_on_seg(p, a, b))


def _seg_seg_dist(a, b, c, d) -> np.ndarray:
    """Distance between segments a-b and c-d (broadcasting over leading axes)."""
    a, b, c, d = (np.asarray(v, dtype=float) for v in (a, b, c, d))
    dist = np.minimum(
        np.minimum(_pt_seg_dist(a, c, d), _pt_seg_dist(b, c, d)),
        np.minimum(_pt_seg_dist(c, a, b), _pt_seg_dist(d, a, b)),
    )
    o1 = _cross(b - a, c - a)
    o2 = _cross(b - a, d - a)
    o3 = _cross(d - c, a - c)
    o4 = _cross(d - c, b - c)
    crossing = (o1 * o2 < 0.0) & (o3 * o4 < 0.0)
    return np.where(crossing, 0.0, dist)


def _arr(p: Point2) -> np.ndarray:
    return np.asarray(p, dtype=float)


# ---------------------------------------------------------------------------
# derived geometry of the conic shapes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _ConeFrame:
    """Local frame of a cone-like shape: apex, unit axis, unit normal, half-angle."""

    apex: np.ndarray
    axis: np.ndarray
    normal: np.ndarray
    length: float
    sin_half: float
    cos_half: float

    @classmethod
    def build(cls, apex: Point2, base: Point2, offset: float) -> "_ConeFrame":
        a = _arr(apex)
        d = _arr(base) - a
        length = float(math.hypot(d[0], d[1]))
        if length > 0.0:
            u = d / length
            s = min(1.0, offset / length)
        else:
            u = np.array([1.0, 0.0])
            s = 0.0
        n = np.array([-u[1], u[0]])
        return cls(a, u, n, length, s, math.sqrt(max(0.0, 1.0 - s * s)))

    def local(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        v = pts - self.apex
        s = v @ self.axis
        h_signed = v @ self.normal
        return s, np.abs(h_signed), np.where(h_signed >= 0.0, 1.0, -1.0)

    def edge_dir(self, side: float) -> np.ndarray:
        return self.cos_half * self.axis + side * self.sin_half * self.normal


def ice_cream_tangent_points(cone: IceCreamCone) -> tuple[Point2, Point2]:
    """Tangency points of the two lines from the apex to the base ball."""
    f = _ConeFrame.build(cone.apex, cone.base, cone.base_radius)
    tangent_len = f.length * f.cos_half
    p = f.apex + tangent_len * f.edge_dir(1.0)
    m = f.apex + tangent_len * f.edge_dir(-1.0)
    return (float(p[0]), float(p[1])), (float(m[0]), float(m[1]))


def bounded_cone_corners(bc: BoundedCone) -> tuple[Point2, Point2]:
    """Far ends of the two straight edges of a ball-cone intersection."""
    assert bc.cone is not None
    f = _ConeFrame.build(bc.cone.apex, bc.cone.base, bc.cone.base_clearance)
    chord = 2.0 * f.length * f.cos_half
    p = f.apex + chord * f.edge_dir(1.0)
    m = f.apex + chord * f.edge_dir(-1.0)
    return (float(p[0]), float(p[1])), (float(m[0]), float(m[1]))


def _ice_cream_is_ball(cone: IceCreamCone) -> bool:
    d = math.dist(cone.apex, cone.base)
    return d == 0.0 or cone.base_radius >= d


def convex_parts(region: Region) -> tuple[Region, ...]:
    """Decompose a region into convex parts whose union is the region."""
    if isinstance(region, CONVEX_TYPES):
        return (region,)
    if isinstance(region, TruncatedIceCreamCone):
        return (region.triangle(), region.ball())
    if isinstance(region, PaddedPolyline):
        pts = region.points
        if len(pts) == 1:
            return (Capsule(pts[0], pts[0], region.pad),)
        return tuple(Capsule(pts[i], pts[i + 1], region.pad) for i in range(len(pts) - 1))
    raise TypeError(f"unsupported region {type(region).__name__}")


def _union_parts(region: Region) -> tuple[Region, ...]:
    """Parts used for the vectorised kernels (the ice-cream cone is split too)."""
    if isinstance(region, IceCreamCone):
        if _ice_cream_is_ball(region):
            return (Ball(region.base, region.base_radius),)
        tp, tm = ice_cream_tangent_points(region)
        return (Triangle(region.apex, tp, tm), Ball(region.base, region.base_radius))
    return convex_parts(region)


# ---------------------------------------------------------------------------
# vectorised point distances
# ---------------------------------------------------------------------------


def _triangle_is_degenerate(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> bool:
    ux, uy = b[0] - a[0], b[1] - a[1]
    vx, vy = c[0] - a[0], c[1] - a[1]
    wx, wy = c[0] - b[0], c[1] - b[1]
    scale = max(ux * ux + uy * uy, vx * vx + vy * vy, wx * wx + wy * wy)
    return abs(ux * vy - uy * vx) <= 1e-12 * scale


def _triangle_inside(a: np.ndarray, b: np.ndarray, c: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Closed-triangle membership; degenerate triangles have no interior."""
    if _triangle_is_degenerate(a, b, c):
        return np.zeros(pts.shape[:-1], dtype=bool)
    sgn = 1.0 if float(_cross(b - a, c - a)) > 0.0 else -1.0
    return ((sgn * _cross(b - a, pts - a) >= 0.0)
            & (sgn * _cross(c - b, pts - b) >= 0.0)
            & (sgn * _cross(a - c, pts - c) >= 0.0))


def _triangle_dist(tri: Triangle, pts: np.ndarray) -> np.ndarray:
    a, b, c = _arr(tri.a), _arr(tri.b), _arr(tri.c)
    dist = np.minimum(np.minimum(_pt_seg_dist(pts, a, b), _pt_seg_dist(pts, b, c)),
                      _pt_seg_dist(pts, c, a))
    return np.where(_triangle_inside(a, b, c, pts), 0.0, dist)


def _ball_dist(ball: Ball, pts: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, _norm(pts - _arr(ball.center)) - ball.radius)


def _halfplane_dist(hp: HalfPlane, pts: np.ndarray) -> np.ndarray:
    n = _arr(hp.toward) - _arr(hp.anchor)
    ln = math.hypot(n[0], n[1])
    if ln == 0.0:
        return np.zeros(len(pts))
    return np.maximum(0.0, -((pts - _arr(hp.anchor)) @ (n / ln)))


def _cone_dist(cone: SolidCone, pts: np.ndarray) -> np.ndarray:
    f = _ConeFrame.build(cone.apex, cone.base, cone.base_clearance)
    s, h, _ = f.local(pts)
    if f.length == 0.0:
        return _norm(pts - f.apex)
    w = h * f.cos_half - s * f.sin_half
    tau = s * f.cos_half + h * f.sin_half
    inside = (s >= 0.0) & (w <= 0.0)
    out = np.where(tau <= 0.0, np.hypot(s, h), w)
    return np.where(inside, 0.0, out)


def _ice_cream_dist(cone: IceCreamCone, pts: np.ndarray) -> np.ndarray:
    if _ice_cream_is_ball(cone):
        return _ball_dist(Ball(cone.base, cone.base_radius), pts)
    f = _ConeFrame.build(cone.apex, cone.base, cone.base_radius)
    s, h, _ = f.local(pts)
    tangent_len = f.length * f.cos_half
    w = h * f.cos_half - s * f.sin_half
    tau = s * f.cos_half + h * f.sin_half
    rad = _norm(pts - _arr(cone.base))
    in_ball = rad <= cone.base_radius
    in_tri = (w <= 0.0) & (s >= 0.0) & (s <= tangent_len * f.cos_half)
    # exterior case analysis: apex vertex, straight edge, or arc
    out = np.where(tau <= 0.0, np.hypot(s, h),
                   np.where((w > 0.0) & (tau < tangent_len), w,
                            np.maximum(0.0, rad - cone.base_radius)))
    return np.where(in_ball | in_tri, 0.0, out)


class _BCGeom:
    """Boundary pieces of a ball-cone intersection: two edges and the far arc."""

    def __init__(self, bc: BoundedCone):
        assert bc.cone is not None
        f = _ConeFrame.build(bc.cone.apex, bc.cone.base, bc.cone.base_clearance)
        self.frame = f
        self.center = _arr(bc.ball.center)
        self.radius = bc.ball.radius
        chord = 2.0 * f.length * f.cos_half
        self.p_plus = f.apex + chord * f.edge_dir(1.0)
        self.p_minus = f.apex + chord * f.edge_dir(-1.0)
        # arc points c satisfy (c - apex) . axis >= arc_level
        self.arc_level = chord * f.cos_half

    def on_arc(self, c: np.ndarray) -> np.ndarray:
        return (c - self.frame.apex) @ self.frame.axis >= self.arc_level - 1e-12 * (1.0 + self.radius)

    def inside(self, pts: np.ndarray) -> np.ndarray:
        s, h, _ = self.frame.local(pts)
        w = h * self.frame.cos_half - s * self.frame.sin_half
        return (_norm(pts - self.center) <= self.radius) & (s >= 0.0) & (w <= 0.0)

    def radial(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        v = pts - self.center
        r = _norm(v)
        safe = np.where(r > 0.0, r, 1.0)
        c = self.center + self.radius * v / safe[..., None]
        return c, r

    def boundary_dist(self, pts: np.ndarray) -> np.ndarray:
        apex = self.frame.apex
        d = np.minimum(_pt_seg_dist(pts, apex, self.p_plus), _pt_seg_dist(pts, apex, self.p_minus))
        c, r = self.radial(pts)
        arc = np.where(self.on_arc(c) & (r > 0.0), np.abs(r - self.radius), np.inf)
        return np.minimum(d, arc)

    def dist(self, pts: np.ndarray) -> np.ndarray:
        return np.where(self.inside(pts), 0.0, self.boundary_dist(pts))

    def arc_segment_dist(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact distance from segments a-b to the far arc."""
        g, R = self.center, self.radius
        ab = b - a
        # segment endpoints to arc (radial foot) and arc endpoints to segment
        best = np.minimum(_pt_seg_dist(self.p_plus, a, b), _pt_seg_dist(self.p_minus, a, b))
        for p in (a, b):
            c, r = self.radial(p)
            best = np.minimum(best, np.where(self.on_arc(c), np.abs(r - R), np.inf))
        # interior-interior: foot of the center on the segment line
        denom = _dot(ab, ab)
        safe = np.where(denom > 0.0, denom, 1.0)
        t = _dot(g - a, ab) / safe
        foot = a + t[..., None] * ab
        c, r = self.radial(foot)
        valid = (denom > 0.0) & (t >= 0.0) & (t <= 1.0) & (r > 0.0) & self.on_arc(c)
        best = np.minimum(best, np.where(valid, _norm(foot - c), np.inf))
        # crossings of the circle inside the arc
        ag = a - g
        qb = 2.0 * _dot(ag, ab)
        qc = _dot(ag, ag) - R * R
        disc = qb * qb - 4.0 * denom * qc
        ok = (denom > 0.0) & (disc >= 0.0)
        sq = np.sqrt(np.where(ok, disc, 0.0))
        for root in ((-qb - sq) / (2.0 * safe), (-qb + sq) / (2.0 * safe)):
            pt = a + root[..., None] * ab
            hit = ok & (root >= 0.0) & (root <= 1.0) & self.on_arc(pt)
            best = np.where(hit, 0.0, best)
        return best


def _bounded_cone_dist(bc: BoundedCone, pts: np.ndarray) -> np.ndarray:
    if bc.cone is None or bc.ball.radius == 0.0:
        return _ball_dist(bc.ball, pts)
    return _BCGeom(bc).dist(pts)


def _capsule_dist(cap: Capsule, pts: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, _pt_seg_dist(pts, _arr(cap.a), _arr(cap.b)) - cap.pad)


def _polyline_dist(poly: PaddedPolyline, pts: np.ndarray, block: int = 1 << 20) -> np.ndarray:
    v = np.asarray(poly.points, dtype=float)
    ax, ay = v[:-1, 0], v[:-1, 1]
    ex, ey = v[1:, 0] - ax, v[1:, 1] - ay
    inv = 1.0 / np.maximum(ex * ex + ey * ey, 1e-300)
    step = max(1, block // len(ax))
    out = np.empty(len(pts))
    for lo in range(0, len(pts), step):
        dx = pts[lo:lo + step, 0, None] - ax
        dy = pts[lo:lo + step, 1, None] - ay
        t = np.minimum(np.maximum((dx * ex + dy * ey) * inv, 0.0), 1.0)
        dx -= t * ex
        dy -= t * ey
        out[lo:lo + step] = (dx * dx + dy * dy).min(axis=1)
    return np.maximum(0.0, np.sqrt(out) - poly.pad)


def point_distances(region: Region, pts) -> np.ndarray:
    """Distance from each row of ``pts`` (shape (n, 2)) to ``region``; 0 inside."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if isinstance(region, Ball):
        return _ball_dist(region, pts)
    if isinstance(region, HalfPlane):
        return _halfplane_dist(region, pts)
    if isinstance(region, SolidCone):
        return _cone_dist(region, pts)
    if isinstance(region, IceCreamCone):
        return _ice_cream_dist(region, pts)
    if isinstance(region, BoundedCone):
        return _bounded_cone_dist(region, pts)
    if isinstance(region, Triangle):
        return _triangle_dist(region, pts)
    if isinstance(region, Capsule):
        return _capsule_dist(region, pts)
    if isinstance(region, PaddedPolyline) and len(region.points) > 1:
        return _polyline_dist(region, pts)
    parts = convex_parts(region)
    out = point_distances(parts[0], pts)
    for part in parts[1:]:
        out = np.minimum(out, point_distances(part, pts))
    return out


def point_distance(region: Region, p: Point2) -> float:
    return float(point_distances(region, np.asarray([p], dtype=float))[0])


def contains(region: Region, p: Point2, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the closed region inflated by ``tol``."""
    return point_distance(region, p) <= tol


def contains_points(region: Region, pts, tol: float = DEFAULT_TOL) -> np.ndarray:
    return point_distances(region, pts) <= tol


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def _closest_of(p: np.ndarray, candidates: list[np.ndarray]) -> np.ndarray:
    dists = [float(_norm(q - p)) for q in candidates]
    return candidates[int(np.argmin(dists))]


def _project_convex(region: Region, p: np.ndarray) -> np.ndarray:
    if isinstance(region, Ball):
        c = _arr(region.center)
        v = p - c
        r = float(_norm(v))
        return p if r <= region.radius else c + v * (region.radius / r)
    if isinstance(region, HalfPlane):
        n = _arr(region.toward) - _arr(region.anchor)
        ln2 = float(_dot(n, n))
        off = float(_dot(p - _arr(region.anchor), n))
        return p if ln2 == 0.0 or off >= 0.0 else p - (off / ln2) * n
    if isinstance(region, SolidCone):
        f = _ConeFrame.build(region.apex, region.base, region.base_clearance)
        if f.length == 0.0:
            return f.apex.copy()
        s, h, side = f.local(p[None, :])
        w = h * f.cos_half - s * f.sin_half
        tau = s * f.cos_half + h * f.sin_half
        if s[0] >= 0.0 and w[0] <= 0.0:
            return p
        if tau[0] <= 0.0:
            return f.apex.copy()
        return f.apex + tau[0] * f.edge_dir(side[0])
    if isinstance(region, IceCreamCone):
        if _ice_cream_is_ball(region):
            return _project_convex(Ball(region.base, region.base_radius), p)
        if point_distance(region, p) == 0.0:
            return p
        f = _ConeFrame.build(region.apex, region.base, region.base_radius)
        s, h, side = f.local(p[None, :])
        tangent_len = f.length * f.cos_half
        w = float(h[0] * f.cos_half - s[0] * f.sin_half)
        tau = float(s[0] * f.cos_half + h[0] * f.sin_half)
        if tau <= 0.0:
            return f.apex.copy()
        if w > 0.0 and tau < tangent_len:
            return f.apex + tau * f.edge_dir(side[0])
        return _project_convex(Ball(region.base, region.base_radius), p)
    if isinstance(region, BoundedCone):
        if region.cone is None or region.ball.radius == 0.0:
            return _project_convex(region.ball, p)
        geom = _BCGeom(region)
        if geom.inside(p[None, :])[0]:
            return p
        apex = geom.frame.apex
        cands = [_closest_on_seg(p, apex, geom.p_plus), _closest_on_seg(p, apex, geom.p_minus)]
        c, r = geom.radial(p[None, :])
        if r[0] > 0.0 and geom.on_arc(c)[0]:
            cands.append(c[0])
        return _closest_of(p, cands)
    if isinstance(region, Triangle):
        if point_distance(region, p) == 0.0:
            return p
        a, b, c = _arr(region.a), _arr(region.b), _arr(region.c)
        return _closest_of(p, [_closest_on_seg(p, a, b), _closest_on_seg(p, b, c),
                               _closest_on_seg(p, c, a)])
    if isinstance(region, Capsule):
        q = _closest_on_seg(p, _arr(region.a), _arr(region.b))
        v = p - q
        r = float(_norm(v))
        return p if r <= region.pad else q + v * (region.pad / r)
    raise TypeError(f"projection needs a convex region, got {type(region).__name__}")


def project(region: Region, p: Point2) -> Point2:
    """Closest point of a convex region to ``p``.

    Unions (truncated ice-cream cone, padded polyline) are rejected; project
    onto their :func:`convex_parts` instead.
    """
    if not isinstance(region, CONVEX_TYPES):
        raise TypeError(f"{type(region).__name__} is not convex; project per convex part")
    q = _project_convex(region, _arr(p))
    return (float(q[0]), float(q[1]))


def dykstra_projection(projections: Sequence[Callable[[np.ndarray], np.ndarray]], p: Point2,
                       tol: float = 1e-9, max_iter: int = 200) -> Point2:
    """Project onto the intersection of closed convex sets by Dykstra's method."""
    x = _arr(p)
    incs = [np.zeros(2) for _ in projections]
    for _ in range(max_iter):
        x_prev = x.copy()
        for i, proj in enumerate(projections):
            y = proj(x + incs[i])
            incs[i] = x + incs[i] - y
            x = y
        if float(_norm(x - x_prev)) <= tol:
            break
    return (float(x[0]), float(x[1]))


# ---------------------------------------------------------------------------
# segment distances
# ---------------------------------------------------------------------------


def _ternary_min(fun: Callable[[float], float], max_iter: int = 100, tol: float = 1e-10) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if fun(m1) <= fun(m2):
            hi = m2
        else:
            lo = m1
    return min(fun(0.0), fun(1.0), fun(0.5 * (lo + hi)))


def segment_distance(region: Region, seg: Segment) -> float:
    """Minimum of :func:`point_distance` over ``seg`` by per-part ternary search.

    Padded polylines use the closed-form segment-to-segment distance per capsule.
    """
    a, b = _arr(seg.a), _arr(seg.b)
    if isinstance(region, PaddedPolyline):
        return float(segment_distances(region, a, b)[0])
    best = math.inf
    for part in _union_parts(region):
        def f(t: float, part=part) -> float:
            return point_distance(part, tuple(a + t * (b - a)))
        best = min(best, _ternary_min(f))
        if best == 0.0:
            break
    return best


def _ray_seg_dist(origin: np.ndarray, direction: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    reach = np.maximum(_norm(a - origin), _norm(b - origin)) + 1.0
    end = origin + reach[..., None] * direction
    return _seg_seg_dist(a, b, origin, end)


def _segment_distances_part(part: Region, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if isinstance(part, Ball):
        return np.maximum(0.0, _pt_seg_dist(_arr(part.center), a, b) - part.radius)
    if isinstance(part, Capsule):
        return np.maximum(0.0, _seg_seg_dist(a, b, _arr(part.a), _arr(part.b)) - part.pad)
    if isinstance(part, Triangle):
        v = np.asarray([part.a, part.b, part.c], dtype=float)
        d = _seg_seg_dist(a[:, None, :], b[:, None, :], v[None], np.roll(v, -1, axis=0)[None]).min(axis=1)
        inside = _triangle_inside(v[0], v[1], v[2], a)
        return np.where(inside, 0.0, d)
    if isinstance(part, HalfPlane):
        return np.minimum(_halfplane_dist(part, a), _halfplane_dist(part, b))
    if isinstance(part, SolidCone):
        d = np.minimum(_cone_dist(part, a), _cone_dist(part, b))
        f = _ConeFrame.build(part.apex, part.base, part.base_clearance)
        if f.length == 0.0:
            return np.minimum(d, _pt_seg_dist(f.apex, a, b))
        for side in (1.0, -1.0):
            d = np.minimum(d, _ray_seg_dist(f.apex, f.edge_dir(side), a, b))
        return d
    if isinstance(part, BoundedCone):
        if part.cone is None or part.ball.radius == 0.0:
            return _segment_distances_part(part.ball, a, b)
        geom = _BCGeom(part)
        apex = geom.frame.apex
        ends = np.asarray([geom.p_plus, geom.p_minus])
        d = _seg_seg_dist(a[:, None, :], b[:, None, :], apex, ends[None]).min(axis=1)
        d = np.minimum(d, geom.arc_segment_dist(a, b))
        return np.where(geom.inside(a), 0.0, d)
    raise TypeError(f"unsupported part {type(part).__name__}")


def segment_distances(region: Region, a, b) -> np.ndarray:
    """Exact distances from ``region`` to each segment ``a[i]``-``b[i]``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    parts = _union_parts(region)
    if isinstance(region, PaddedPolyline) and len(parts) > 1:
        pts = np.asarray(region.points)
        d = _seg_seg_dist(a[:, None, :], b[:, None, :], pts[None, :-1, :], pts[None, 1:, :])
        return np.maximum(0.0, d.min(axis=1) - region.pad)
    out = _segment_distances_part(parts[0], a, b)
    for part in parts[1:]:
        out = np.minimum(out, _segment_distances_part(part, a, b))
    return out


# ---------------------------------------------------------------------------
# sampling (tests, plotting)
# ---------------------------------------------------------------------------


def bounding_box(region: Region) -> tuple[float, float, float, float]:
    """Axis-aligned box containing a bounded region."""
    boxes = []
    for part in _union_parts(region):
        if isinstance(part, Ball):
            (cx, cy), r = part.center, part.radius
            boxes.append((cx - r, cy - r, cx + r, cy + r))
        elif isinstance(part, Triangle):
            xs = (part.a[0], part.b[0], part.c[0])
            ys = (part.a[1], part.b[1], part.c[1])
            boxes.append((min(xs), min(ys), max(xs), max(ys)))
        elif isinstance(part, Capsule):
            r = part.pad
            boxes.append((min(part.a[0], part.b[0]) - r, min(part.a[1], part.b[1]) - r,
                          max(part.a[0], part.b[0]) + r, max(part.a[1], part.b[1]) + r))
        elif isinstance(part, BoundedCone):
            (cx, cy), r = part.ball.center, part.ball.radius
            boxes.append((cx - r, cy - r, cx + r, cy + r))
        else:
            raise TypeError(f"{type(part).__name__} is unbounded")
    arr = np.asarray(boxes)
    return (float(arr[:, 0].min()), float(arr[:, 1].min()),
            float(arr[:, 2].max()), float(arr[:, 3].max()))


def _circle_pts(c: Point2, r: float, n: int) -> np.ndarray:
    ang = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return np.column_stack([c[0] + r * np.cos(ang), c[1] + r * np.sin(ang)])


def _seg_pts(a, b, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)[:, None]
    return (1.0 - t) * _arr(a) + t * _arr(b)


def sample_boundary(region: Region, n: int) -> np.ndarray:
    """Points on the boundaries of the convex parts (all are members of the region)."""
    parts = _union_parts(region)
    per = max(3, n // len(parts))
    chunks = []
    for part in parts:
        if isinstance(part, Ball):
            chunks.append(_circle_pts(part.center, part.radius, per))
        elif isinstance(part, Triangle):
            k = max(2, per // 3)
            chunks += [_seg_pts(part.a, part.b, k), _seg_pts(part.b, part.c, k),
                       _seg_pts(part.c, part.a, k)]
        elif isinstance(part, Capsule):
            k = max(2, per // 4)
            d = _arr(part.b) - _arr(part.a)
            ln = float(_norm(d))
            nrm = np.array([-d[1], d[0]]) / ln if ln > 0 else np.array([0.0, 1.0])
            chunks += [_seg_pts(_arr(part.a) + part.pad * nrm, _arr(part.b) + part.pad * nrm, k),
                       _seg_pts(_arr(part.a) - part.pad * nrm, _arr(part.b) - part.pad * nrm, k),
                       _circle_pts(part.a, part.pad, k), _circle_pts(part.b, part.pad, k)]
        elif isinstance(part, BoundedCone):
            if part.cone is None or part.ball.radius == 0.0:
                chunks.append(_circle_pts(part.ball.center, part.ball.radius, per))
                continue
            geom = _BCGeom(part)
            k = max(2, per // 3)
            circ = _circle_pts(part.ball.center, part.ball.radius, 8 * k)
            arc = circ[geom.on_arc(circ)]
            chunks += [_seg_pts(geom.frame.apex, geom.p_plus, k),
                       _seg_pts(geom.frame.apex, geom.p_minus, k), arc[:: max(1, len(arc) // k)]]
        else:
            raise TypeError(f"{type(part).__name__} is unbounded")
    return np.vstack(chunks)


def sample_interior(region: Region, n: int, rng: np.random.Generator) -> np.ndarray:
    """Up to ``n`` uniform points inside a bounded region (rejection sampling)."""
    x0, y0, x1, y1 = bounding_box(region)
    out = []
    have = 0
    for _ in range(50):
        cand = np.column_stack([rng.uniform(x0, x1, 4 * n), rng.uniform(y0, y1, 4 * n)])
        keep = cand[contains_points(region, cand, 0.0)]
        out.append(keep)
        have += len(keep)
        if have >= n:
            break
    pts = np.vstack(out) if out else np.empty((0, 2))
    return pts[:n]
