import math

import numpy as np
import pytest

from conftest import random_goal, random_pose
from unicycle_nav import geometry as geo
from unicycle_nav.geometry import Ball, HalfPlane, IceCreamCone, PaddedPolyline, SolidCone, \
    TruncatedIceCreamCone
from unicycle_nav.prediction import (
    PredictorKind,
    predict,
    predict_ball,
    predict_bounded_cone,
    predict_forward_sim,
    predict_ice_cream,
    predict_truncated,
    predict_unbounded,
)
from unicycle_nav.unicycle import ControlGains, Pose, goal_alignment, simulate_closed_loop

G = ControlGains()


def test_predictor_kinds():
    assert [k.value for k in PredictorKind] == ["ball", "bc", "ic", "tc", "fs"]
    assert PredictorKind("ic").label == "ice-cream cone"


def test_ball_examples():
    assert predict_ball(Pose(0, 0, 1.0), (3, 4)) == Ball((3, 4), 5.0)
    assert predict_ball(Pose(2, 2, 0.0), (2, 2)) == Ball((2, 2), 0.0)
    assert predict_ball(Pose(0, 0, 0.3), (3, 4)) == predict_ball(Pose(0, 0, -2.0), (3, 4))


def test_unbounded_examples():
    cone = predict_unbounded(Pose(0, 0, 0), (4, 3))
    assert isinstance(cone, SolidCone) and cone.base_clearance == pytest.approx(3)
    assert predict_unbounded(Pose(0, 0, math.pi), (4, 0)) == HalfPlane((0, 0), (4, 0))
    limit = predict_unbounded(Pose(0, 0, math.pi / 2), (4, 0))
    assert isinstance(limit, SolidCone) and limit.base_clearance == pytest.approx(4)
    # the limit cone is the half-plane
    pts = np.random.default_rng(0).uniform(-10, 10, (500, 2))
    hp = HalfPlane((0, 0), (4, 0))
    assert np.allclose(geo.point_distances(limit, pts), geo.point_distances(hp, pts), atol=1e-9)


def test_bounded_cone_branches():
    bc = predict_bounded_cone(Pose(0, 0, 0.2), (4, 3))
    assert bc.cone is not None and bc.ball == Ball((4, 3), 5.0)
    assert predict_bounded_cone(Pose(0, 0, math.pi), (4, 3)).cone is None


def test_ice_cream_examples():
    assert predict_ice_cream(Pose(0, 0, 0), (4, 3)) == IceCreamCone((0, 0), (4, 3), 3.0)
    deg = predict_ice_cream(Pose(0, 0, math.pi / 2), (4, 0))
    pts = np.random.default_rng(1).uniform(-5, 10, (500, 2))
    assert np.allclose(geo.point_distances(deg, pts), geo.point_distances(Ball((4, 0), 4), pts), atol=1e-9)
    assert predict_ice_cream(Pose(0, 0, math.pi), (4, 0)) == Ball((4, 0), 4.0)


def test_truncated_examples():
    tc = predict_truncated(Pose(0, 0, 0), (4, 3))
    assert isinstance(tc, TruncatedIceCreamCone)
    tri = tc.triangle()
    assert {tri.a, tri.b, tri.c} == {(0.0, 0.0), (4.0, 3.0), (4.0, 0.0)}
    assert tc.ball() == Ball((4, 3), 3.0)
    seg = predict_truncated(Pose(0, 0, 0), (5, 0))
    assert geo.contains(seg, (2.5, 0.0), 0.0)
    assert geo.point_distance(seg, (2.5, 0.1)) == pytest.approx(0.1)
    assert geo.point_distance(seg, (6.0, 0.0)) == pytest.approx(1.0)


def test_forward_sim_examples():
    at_goal = predict_forward_sim(Pose(1, 1, 0.4), (1, 1), G)
    assert at_goal.points == ((1.0, 1.0),) and at_goal.pad == 0.0 and at_goal.converged
    straight = predict_forward_sim(Pose(0, 0, 0), (5, 0), G)
    pts = np.asarray(straight.points)
    assert np.abs(pts[:, 1]).max() == 0.0
    assert pts[:, 0].min() >= 0.0 and pts[:, 0].max() <= 5.0
    assert straight.converged
    short = predict_forward_sim(Pose(0, 0, 2.0), (5, 0), G, horizon=0.5)
    assert not short.converged


def test_forward_sim_pad_covers_inter_sample_motion(rng):
    for _ in range(10):
        pose, goal = random_pose(rng), random_goal(rng)
        fs = predict_forward_sim(pose, goal, G, dt=0.05)
        fine = simulate_closed_loop(pose, goal, G, dt=0.005, horizon=60)
        assert geo.contains_points(fs, fine.states[:, :2], 1e-6).all()


def test_forward_sim_inside_truncated_cone(rng):
    n = 0
    while n < 30:
        pose, goal = random_pose(rng), random_goal(rng)
        if goal_alignment(pose, goal) < 0:
            continue
        fs = predict_forward_sim(pose, goal, G)
        tc = predict_truncated(pose, goal)
        assert geo.contains_points(tc, np.asarray(fs.points), 1e-6).all()
        n += 1


def test_predict_dispatch():
    pose, goal = Pose(0, 0, 0.1), (3, 1)
    assert predict("ball", pose, goal) == predict_ball(pose, goal)
    assert predict(PredictorKind.BOUNDED_CONE, pose, goal) == predict_bounded_cone(pose, goal)
    assert predict("ic", pose, goal) == predict_ice_cream(pose, goal)
    assert predict("tc", pose, goal) == predict_truncated(pose, goal)
    assert isinstance(predict("fs", pose, goal), PaddedPolyline)
    with pytest.raises(ValueError):
        predict("uc", pose, goal)


def test_ice_cream_continuous_across_alignment_boundary():
    goal = (4.0, 0.0)
    for eps in (1e-4, 1e-6):
        aligned = predict_ice_cream(Pose(0, 0, math.pi / 2 - eps), goal)
        misaligned = predict_ice_cream(Pose(0, 0, math.pi / 2 + eps), goal)
        assert isinstance(aligned, IceCreamCone) and isinstance(misaligned, Ball)
        a = geo.sample_boundary(aligned, 2000)
        b = geo.sample_boundary(misaligned, 2000)
        hausdorff = max(geo.point_distances(misaligned, a).max(), geo.point_distances(aligned, b).max())
        assert hausdorff < 1e-3


def test_containment_smoke(rng):
    for _ in range(20):
        pose, goal = random_pose(rng), random_goal(rng)
        traj = simulate_closed_loop(pose, goal, G)
        for kind in ("ball", "bc", "ic", "tc"):
            assert geo.contains_points(predict(kind, pose, goal), traj.states[:, :2], 1e-6).all()
