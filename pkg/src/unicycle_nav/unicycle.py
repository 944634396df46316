"""Kinematic unicycle model and the forward motion controller that drives it to a goal."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .geometry import Point2, as_point, wrap_angle


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    @property
    def position(self) -> Point2:
        return (self.x, self.y)


@dataclass(frozen=True)
class ControlGains:
    k_v: float = 1.0
    k_omega: float = 1.5

    def __post_init__(self) -> None:
        if not (self.k_v > 0.0 and self.k_omega > 0.0):
            raise ValueError("control gains must be positive")


class ControlInput(NamedTuple):
    v: float
    omega: float


def _offsets(pose: Pose, goal: Point2) -> tuple[float, float]:
    """Goal offset in the body frame: (along heading, to the left of heading)."""
    dx, dy = goal[0] - pose.x, goal[1] - pose.y
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    return c * dx + s * dy, -s * dx + c * dy


def goal_alignment(pose: Pose, goal: Point2) -> float:
    """Signed projection of the goal offset on the heading direction."""
    return _offsets(pose, goal)[0]


def perpendicular_alignment_distance(pose: Pose, goal: Point2) -> float:
    """Lateral distance of the goal from the robot's heading line."""
    return abs(_offsets(pose, goal)[1])


def forward_control(pose: Pose, goal: Point2, gains: ControlGains,
                    capture_radius: float = 0.0) -> ControlInput:
    """Forward-only proportional control towards ``goal``.

    The turn rate is zeroed at the goal (atan2(0, 0) is undefined) and, if
    ``capture_radius`` > 0, anywhere closer than that to suppress chattering.
    """
    along, left = _offsets(pose, goal)
    v = gains.k_v * max(0.0, along)
    if along == 0.0 and left == 0.0:
        return ControlInput(0.0, 0.0)
    if capture_radius > 0.0 and math.hypot(along, left) < capture_radius:
        return ControlInput(v, 0.0)
    return ControlInput(v, gains.k_omega * math.atan2(left, along))


def dynamics(pose: Pose, u: ControlInput) -> tuple[float, float, float]:
    return (u.v * math.cos(pose.theta), u.v * math.sin(pose.theta), u.omega)


def rk4_step(f: Callable[[Sequence[float]], Sequence[float]], state: Sequence[float],
             dt: float) -> list[float]:
    """One classical Runge-Kutta step for an autonomous system given as plain sequences."""
    k1 = f(state)
    s2 = [x + 0.5 * dt * k for x, k in zip(state, k1)]
    k2 = f(s2)
    s3 = [x + 0.5 * dt * k for x, k in zip(state, k2)]
    k3 = f(s3)
    s4 = [x + dt * k for x, k in zip(state, k3)]
    k4 = f(s4)
    return [x + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
            for x, a, b, c, d in zip(state, k1, k2, k3, k4)]


def closed_loop_rhs(goal: Point2, gains: ControlGains,
                    capture_radius: float = 0.0) -> Callable[[Sequence[float]], tuple[float, float, float]]:
    gx, gy = goal
    kv, kw = gains.k_v, gains.k_omega

    def rhs(state: Sequence[float]) -> tuple[float, float, float]:
        x, y, th = state
        c, s = math.cos(th), math.sin(th)
        dx, dy = gx - x, gy - y
        along = c * dx + s * dy
        left = -s * dx + c * dy
        v = kv * along if along > 0.0 else 0.0
        if (along == 0.0 and left == 0.0) or (capture_radius > 0.0 and math.hypot(dx, dy) < capture_radius):
            w = 0.0
        else:
            w = kw * math.atan2(left, along)
        return (v * c, v * s, w)

    return rhs


@dataclass
class ClosedLoopTrajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 3): x, y, theta
    converged: bool

    def pose(self, i: int) -> Pose:
        x, y, th = self.states[i]
        return Pose(float(x), float(y), float(th))


def simulate_closed_loop(pose: Pose, goal: Sequence[float], gains: ControlGains, dt: float = 0.01,
                         horizon: float = 60.0, capture_radius: float = 1e-3,
                         stop_on_capture: bool = True) -> ClosedLoopTrajectory:
    """Integrate the robot under :func:`forward_control` towards a fixed goal with RK4.

    Stops once the robot is within ``capture_radius`` of the goal (if
    ``stop_on_capture``) or when ``horizon`` is exhausted.
    """
    if dt <= 0.0 or horizon <= 0.0:
        raise ValueError("dt and horizon must be positive")
    goal = as_point(goal)
    gx, gy = goal
    kv, kw = gains.k_v, gains.k_omega
    cos, sin, atan2 = math.cos, math.sin, math.atan2

    def rhs(x: float, y: float, th: float) -> tuple[float, float, float]:
        c, s = cos(th), sin(th)
        dx, dy = gx - x, gy - y
        along = c * dx + s * dy
        left = -s * dx + c * dy
        v = kv * along if along > 0.0 else 0.0
        w = 0.0 if (along == 0.0 and left == 0.0) else kw * atan2(left, along)
        return v * c, v * s, w

    x, y, th = pose.x, pose.y, pose.theta
    times = [0.0]
    states = [(x, y, th)]
    n_steps = int(math.ceil(horizon / dt - 1e-9))
    converged = math.hypot(gx - x, gy - y) < capture_radius
    for k in range(1, n_steps + 1):
        if converged and stop_on_capture:
            break
        h = min(dt, horizon - times[-1])
        a1, b1, c1 = rhs(x, y, th)
        a2, b2, c2 = rhs(x + 0.5 * h * a1, y + 0.5 * h * b1, th + 0.5 * h * c1)
        a3, b3, c3 = rhs(x + 0.5 * h * a2, y + 0.5 * h * b2, th + 0.5 * h * c2)
        a4, b4, c4 = rhs(x + h * a3, y + h * b3, th + h * c3)
        x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        y += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        th = wrap_angle(th + h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4))
        times.append(k * dt if k < n_steps else horizon)
        states.append((x, y, th))
        converged = math.hypot(gx - x, gy - y) < capture_radius
    return ClosedLoopTrajectory(np.asarray(times), np.asarray(states), converged)
