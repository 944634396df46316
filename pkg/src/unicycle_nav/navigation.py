"""Reference-governor navigation of the unicycle along a piecewise linear path.

A virtual governor follows a path-pursuit vector field but only as fast as the
predicted robot motion towards it stays clear of the free-space boundary; the
robot itself just runs the forward motion controller towards the governor.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import geometry as geo
from .environment import Environment
from .geometry import Point2, as_point, wrap_angle
from .prediction import PredictorKind, predict
from .unicycle import ControlGains, Pose, forward_control

log = logging.getLogger(__name__)

COLUMNS = ("t", "x", "y", "theta", "gx", "gy", "sigma", "v", "omega")


class SimulationRejected(ValueError):
    """The scenario cannot be simulated (e.g. the initial safety level is not positive)."""


class PathPolyline:
    """Piecewise linear path parameterised by normalised arc length on [0, 1]."""

    def __init__(self, waypoints: Sequence[Sequence[float]]):
        pts = np.asarray([as_point(w) for w in waypoints], dtype=float)
        if len(pts) < 2:
            raise ValueError("path needs at least 2 waypoints")
        seg_len = np.hypot(*(pts[1:] - pts[:-1]).T)
        total = float(seg_len.sum())
        if not total > 0.0:
            raise ValueError("path length must be positive")
        keep = seg_len > 0.0
        self.waypoints = pts
        self.starts = pts[:-1][keep]
        self.ends = pts[1:][keep]
        self.lengths = seg_len[keep]
        self.total_length = total
        cum = np.concatenate([[0.0], np.cumsum(self.lengths)])
        self.alpha_start = cum[:-1] / total
        self.alpha_end = cum[1:] / total

    def __repr__(self) -> str:
        return f"PathPolyline({self.waypoints.tolist()!r})"

    @property
    def end(self) -> Point2:
        return (float(self.waypoints[-1, 0]), float(self.waypoints[-1, 1]))

    def point_at(self, alpha: float) -> Point2:
        alpha = min(1.0, max(0.0, alpha))
        k = int(np.searchsorted(self.alpha_end, alpha, side="left"))
        k = min(k, len(self.lengths) - 1)
        span = self.alpha_end[k] - self.alpha_start[k]
        t = 0.0 if span <= 0.0 else (alpha - self.alpha_start[k]) / span
        p = self.starts[k] + t * (self.ends[k] - self.starts[k])
        return (float(p[0]), float(p[1]))

    def distance(self, p: Point2) -> float:
        return float(geo._pt_seg_dist(np.asarray(p, dtype=float), self.starts, self.ends).min())


@dataclass(frozen=True)
class NavGains:
    gains: ControlGains = ControlGains()
    k_path: float = 1.0
    k_gov: float = 4.0

    def __post_init__(self) -> None:
        if not (self.k_path > 0.0 and self.k_gov > 0.0):
            raise ValueError("navigation gains must be positive")


@dataclass(frozen=True)
class NavState:
    pose: Pose
    governor: Point2
    time: float = 0.0


@dataclass(frozen=True)
class Scenario:
    environment: Environment
    path: PathPolyline
    initial_pose: Pose
    initial_governor: Point2
    gains: NavGains = NavGains()
    predictor: PredictorKind = PredictorKind.ICE_CREAM
    dt: float = 0.01
    horizon: float = 120.0
    # the forward-simulation predictor runs its own inner integration
    fs_dt: float = 0.05
    fs_horizon: float = 30.0
    goal_tolerance: float = 0.05
    capture_radius: float = 1e-3
    name: str = ""

    def replace(self, **changes) -> "Scenario":
        if "predictor" in changes:
            changes["predictor"] = PredictorKind(changes["predictor"])
        return dataclasses.replace(self, **changes)


@dataclass
class TrajectoryLog:
    rows: np.ndarray  # (n, 9) in COLUMNS order
    status: str  # reached | horizon | frozen
    predictor: str = ""
    dt: float = 0.0
    clearance: np.ndarray | None = None  # robot distance to the nearest edge, per row
    governor_speed: np.ndarray | None = None  # |d governor / dt|, per row
    voronoi_violations: int = 0

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, COLUMNS.index(name)]

    @property
    def times(self) -> np.ndarray:
        return self.rows[:, 0]

    @property
    def final_position(self) -> Point2:
        return (float(self.rows[-1, 1]), float(self.rows[-1, 2]))

    @property
    def travel_time(self) -> float:
        return float(self.rows[-1, 0])

    @property
    def mean_speed(self) -> float:
        return float(self.column("v").mean())


def projected_path_goal(path: PathPolyline, env: Environment, g: Point2) -> Point2:
    """Furthest path point inside the ball around ``g`` of radius ``d(g, boundary)``."""
    r = env.boundary_distance(g)
    gp = np.asarray(g, dtype=float)
    a, b = path.starts, path.ends
    ab = b - a
    ag = a - gp
    qa = path.lengths ** 2
    qb = 2.0 * (ag[:, 0] * ab[:, 0] + ag[:, 1] * ab[:, 1])
    qc = ag[:, 0] ** 2 + ag[:, 1] ** 2 - r * r
    disc = qb * qb - 4.0 * qa * qc
    ok = disc >= 0.0
    if not ok.any():
        return path.point_at(0.0)
    sq = np.sqrt(np.where(ok, disc, 0.0))
    t_lo = (-qb - sq) / (2.0 * qa)
    t_hi = np.minimum((-qb + sq) / (2.0 * qa), 1.0)
    ok &= (t_hi >= 0.0) & (t_lo <= 1.0)
    if not ok.any():
        return path.point_at(0.0)
    alpha = np.where(ok, path.alpha_start + t_hi * (path.alpha_end - path.alpha_start), -1.0)
    # ties go to the later segment
    k = len(alpha) - 1 - int(np.argmax(alpha[::-1]))
    p = a[k] + t_hi[k] * ab[k]
    return (float(p[0]), float(p[1]))


def path_pursuit_field(path: PathPolyline, env: Environment, g: Point2, k_path: float) -> Point2:
    target = projected_path_goal(path, env, g)
    return (-k_path * (g[0] - target[0]), -k_path * (g[1] - target[1]))


def governor_velocity(field_value: Sequence[float], sigma: float, k_gov: float) -> Point2:
    """``k_gov`` times the projection of ``field_value`` onto the ball of radius ``sigma``."""
    fx, fy = float(field_value[0]), float(field_value[1])
    if sigma <= 0.0:
        return (0.0, 0.0)
    n = math.hypot(fx, fy)
    scale = 1.0 if n <= sigma else sigma / n
    return (k_gov * scale * fx, k_gov * scale * fy)


@dataclass(frozen=True)
class Derivative:
    dpose: tuple[float, float, float]
    dgovernor: Point2
    sigma: float
    v: float
    omega: float


def coupled_derivative(state: NavState, scenario: Scenario) -> Derivative:
    """Right-hand side of the coupled robot-governor system at ``state``."""
    pose, gov = state.pose, state.governor
    ng = scenario.gains
    u = forward_control(pose, gov, ng.gains, capture_radius=scenario.capture_radius)
    region = predict(scenario.predictor, pose, gov, ng.gains,
                     fs_dt=scenario.fs_dt, fs_horizon=scenario.fs_horizon)
    sigma = scenario.environment.safety_level(region, pose.position)
    if sigma > 0.0:
        field = path_pursuit_field(scenario.path, scenario.environment, gov, ng.k_path)
        dgov = governor_velocity(field, sigma, ng.k_gov)
    else:
        dgov = (0.0, 0.0)
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    return Derivative((u.v * c, u.v * s, u.omega), dgov, sigma, u.v, u.omega)


def _as_vector(d: Derivative) -> tuple[float, ...]:
    return (*d.dpose, *d.dgovernor)


def _state(vec: Sequence[float], t: float = 0.0) -> NavState:
    return NavState(Pose(vec[0], vec[1], vec[2]), (vec[3], vec[4]), t)


def initial_safety_level(scenario: Scenario) -> float:
    pose, gov = scenario.initial_pose, scenario.initial_governor
    region = predict(scenario.predictor, pose, gov, scenario.gains.gains,
                     fs_dt=scenario.fs_dt, fs_horizon=scenario.fs_horizon)
    return scenario.environment.safety_level(region, pose.position)


def simulate(scenario: Scenario) -> TrajectoryLog:
    """Fixed-step RK4 integration of the robot-governor system, one log row per step.

    Raises :class:`SimulationRejected` if the initial safety level is not
    strictly positive.
    """
    if scenario.dt <= 0.0 or scenario.horizon <= 0.0:
        raise SimulationRejected("dt and horizon must be positive")
    if not initial_safety_level(scenario) > 0.0:
        raise SimulationRejected("initial safety level must be strictly positive")

    env, path, dt = scenario.environment, scenario.path, scenario.dt
    goal = path.end
    tol = scenario.goal_tolerance
    p0 = scenario.initial_pose
    vec = [p0.x, p0.y, p0.theta, float(scenario.initial_governor[0]), float(scenario.initial_governor[1])]
    n_max = int(math.ceil(scenario.horizon / dt - 1e-9))

    rows, clearance, gov_speed = [], [], []
    voronoi_violations = 0
    still_since = None
    status = "horizon"
    k = 0
    while True:
        t = k * dt
        d1 = coupled_derivative(_state(vec, t), scenario)
        rows.append((t, vec[0], vec[1], vec[2], vec[3], vec[4], d1.sigma, d1.v, d1.omega))
        clearance.append(env.obstacle_distance((vec[0], vec[1])))
        gspeed = math.hypot(*d1.dgovernor)
        gov_speed.append(gspeed)
        gpos = (vec[3], vec[4])
        if path.distance(gpos) > env.boundary_distance(gpos) + 1e-9:
            if voronoi_violations == 0:
                log.warning("governor left the path's Voronoi domain at t=%.3f", t)
            voronoi_violations += 1

        if math.dist(gpos, goal) < tol and math.dist((vec[0], vec[1]), goal) < tol:
            status = "reached"
            break
        if max(d1.v, abs(d1.omega), gspeed) < 1e-9:
            still_since = t if still_since is None else still_since
            if t - still_since >= 1.0:
                status = "frozen"
                break
        else:
            still_since = None
        if k >= n_max:
            break

        k1 = _as_vector(d1)
        s2 = [x + 0.5 * dt * q for x, q in zip(vec, k1)]
        k2 = _as_vector(coupled_derivative(_state(s2), scenario))
        s3 = [x + 0.5 * dt * q for x, q in zip(vec, k2)]
        k3 = _as_vector(coupled_derivative(_state(s3), scenario))
        s4 = [x + dt * q for x, q in zip(vec, k3)]
        k4 = _as_vector(coupled_derivative(_state(s4), scenario))
        vec = [x + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d) for x, a, b, c, d in zip(vec, k1, k2, k3, k4)]
        vec[2] = wrap_angle(vec[2])
        k += 1

    return TrajectoryLog(np.asarray(rows, dtype=float), status, scenario.predictor.value, dt,
                         np.asarray(clearance), np.asarray(gov_speed), voronoi_violations)
