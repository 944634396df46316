"""Feedback motion prediction regions for the unicycle under forward motion control.

Each predictor maps a pose and a goal to a planar region that contains the
whole future closed-loop position trajectory towards that goal.
"""

from __future__ import annotations

import enum
import math

from .geometry import (
    Ball,
    BoundedCone,
    HalfPlane,
    IceCreamCone,
    PaddedPolyline,
    Point2,
    Region,
    SolidCone,
    TruncatedIceCreamCone,
)
from .unicycle import (
    ControlGains,
    Pose,
    goal_alignment,
    perpendicular_alignment_distance,
    simulate_closed_loop,
)

FS_CAPTURE_RADIUS = 1e-3
FS_DEFAULT_DT = 0.01
FS_DEFAULT_HORIZON = 60.0

BoundedConePrediction = BoundedCone


class PredictorKind(str, enum.Enum):
    BALL = "ball"
    BOUNDED_CONE = "bc"
    ICE_CREAM = "ic"
    TRUNCATED = "tc"
    FORWARD_SIM = "fs"

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    PredictorKind.BALL: "circular ball",
    PredictorKind.BOUNDED_CONE: "bounded cone",
    PredictorKind.ICE_CREAM: "ice-cream cone",
    PredictorKind.TRUNCATED: "truncated ice-cream cone",
    PredictorKind.FORWARD_SIM: "forward simulation",
}


def predict_ball(pose: Pose, goal: Point2) -> Ball:
    return Ball(goal, math.dist(goal, pose.position))


def predict_unbounded(pose: Pose, goal: Point2) -> SolidCone | HalfPlane:
    """Unbounded cone (or half-plane when misaligned); for testing only.

    Unbounded sets have zero clearance in any bounded workspace, so this is
    never offered as a predictor.
    """
    if goal_alignment(pose, goal) >= 0.0:
        return SolidCone(pose.position, goal, perpendicular_alignment_distance(pose, goal))
    return HalfPlane(pose.position, goal)


def predict_bounded_cone(pose: Pose, goal: Point2) -> BoundedCone:
    ball = predict_ball(pose, goal)
    if goal_alignment(pose, goal) >= 0.0:
        cone = SolidCone(pose.position, goal, min(ball.radius, perpendicular_alignment_distance(pose, goal)))
        return BoundedCone(ball, cone)
    return BoundedCone(ball, None)


def predict_ice_cream(pose: Pose, goal: Point2) -> IceCreamCone | Ball:
    if goal_alignment(pose, goal) >= 0.0:
        dist = math.dist(goal, pose.position)
        return IceCreamCone(pose.position, goal, min(dist, perpendicular_alignment_distance(pose, goal)))
    return predict_ball(pose, goal)


def predict_truncated(pose: Pose, goal: Point2) -> TruncatedIceCreamCone | Ball:
    if goal_alignment(pose, goal) >= 0.0:
        return TruncatedIceCreamCone(pose.position, goal, pose.theta)
    return predict_ball(pose, goal)


def predict_forward_sim(pose: Pose, goal: Point2, gains: ControlGains, dt: float = FS_DEFAULT_DT,
                        horizon: float = FS_DEFAULT_HORIZON,
                        capture_radius: float = FS_CAPTURE_RADIUS) -> PaddedPolyline:
    """Padded polyline through the simulated closed-loop positions.

    The pad covers the excursion between samples (speed is at most
    ``k_v * |goal - start|``) and the unsimulated tail inside the capture ball.
    ``converged`` is False when the horizon ran out before capture.
    """
    traj = simulate_closed_loop(pose, goal, gains, dt=dt, horizon=horizon,
                                capture_radius=capture_radius)
    pts = traj.states[:, :2]
    v_max = gains.k_v * math.dist(goal, pose.position)
    tail = math.dist(goal, (float(pts[-1, 0]), float(pts[-1, 1])))
    pad = max(0.5 * v_max * dt, 2.0 * tail)
    return PaddedPolyline(tuple(zip(pts[:, 0].tolist(), pts[:, 1].tolist())), pad, converged=traj.converged)


def predict(kind: PredictorKind | str, pose: Pose, goal: Point2, gains: ControlGains | None = None,
            fs_dt: float = FS_DEFAULT_DT, fs_horizon: float = FS_DEFAULT_HORIZON) -> Region:
    kind = PredictorKind(kind)
    if kind is PredictorKind.BALL:
        return predict_ball(pose, goal)
    if kind is PredictorKind.BOUNDED_CONE:
        return predict_bounded_cone(pose, goal)
    if kind is PredictorKind.ICE_CREAM:
        return predict_ice_cream(pose, goal)
    if kind is PredictorKind.TRUNCATED:
        return predict_truncated(pose, goal)
    return predict_forward_sim(pose, goal, gains or ControlGains(), dt=fs_dt, horizon=fs_horizon)
