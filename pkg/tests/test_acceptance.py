"""Acceptance suite: one test per criterion, each printing a single pass/fail line."""

import json
import math

import numpy as np
import pytest

import oracles
from conftest import random_goal, random_pose
from unicycle_nav import geometry as geo
from unicycle_nav.geometry import Segment
from unicycle_nav.prediction import predict, predict_unbounded
from unicycle_nav.scenario_file import GOLDEN_SCENARIOS, golden_scenario_path
from unicycle_nav.unicycle import (
    ControlGains,
    Pose,
    goal_alignment,
    perpendicular_alignment_distance,
    simulate_closed_loop,
)

G = ControlGains()
TOL = 1e-6
CONVEX_KINDS = ("ball", "bc", "ic", "tc")
SPEED_SLACK = 0.01


def report(capsys, n, name, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n} {name}: {'PASS' if ok else 'FAIL'} ({detail})")


def _region_samples(region, n, rng):
    half = n // 2
    return np.vstack([geo.sample_boundary(region, half), geo.sample_interior(region, n - half, rng)])


def _aligned_pose_goal(rng):
    while True:
        pose, goal = random_pose(rng), random_goal(rng)
        if goal_alignment(pose, goal) >= 0.0 and math.dist(pose.position, goal) > 1e-3:
            return pose, goal


def test_criterion_1_containment(capsys, rng):
    samples = violations = 0
    for _ in range(200):
        pose, goal = random_pose(rng), random_goal(rng)
        traj = simulate_closed_loop(pose, goal, G, dt=0.01, capture_radius=1e-3)
        pts = traj.states[:, :2]
        for kind in CONVEX_KINDS:
            inside = geo.contains_points(predict(kind, pose, goal), pts, TOL)
            samples += len(pts)
            violations += int((~inside).sum())
    ok = violations == 0
    report(capsys, 1, "containment", ok, f"{violations} violations in {samples} samples")
    assert ok


def test_criterion_2_positive_inclusion(capsys, rng):
    violations = checked = 0
    for _ in range(50):
        pose, goal = random_pose(rng), random_goal(rng)
        traj = simulate_closed_loop(pose, goal, G, dt=0.01)
        n = len(traj.times)
        if n < 3:
            continue
        for _ in range(20):
            i, j = sorted(rng.choice(n, size=2, replace=False))
            for kind in ("ball", "ic", "tc"):
                later = predict(kind, traj.pose(j), goal)
                pts = _region_samples(later, 1000, rng)
                inside = geo.contains_points(predict(kind, traj.pose(i), goal), pts, TOL)
                violations += int((~inside).sum())
                checked += len(pts)

    # the shipped bounded-cone counterexample
    cx = json.loads(golden_scenario_path("bc_counterexample").read_text())
    gains = ControlGains(cx["gains"]["k_v"], cx["gains"]["k_omega"])
    p = cx["pose"]
    goal = tuple(cx["goal"])
    traj = simulate_closed_loop(Pose(p["x"], p["y"], p["theta"]), goal, gains, dt=cx["dt"],
                                horizon=cx["t_prime"], stop_on_capture=False)
    i, j = round(cx["t"] / cx["dt"]), round(cx["t_prime"] / cx["dt"])
    assert traj.times[j] == pytest.approx(cx["t_prime"])
    early, late = predict("bc", traj.pose(i), goal), predict("bc", traj.pose(j), goal)
    w = np.array([cx["witness"]])
    lib_cx = bool(geo.contains_points(late, w, 0.0)[0] and not geo.contains_points(early, w, TOL)[0])
    oracle_cx = bool(oracles.member(late, w, 0.0)[0] and not oracles.member(early, w, TOL)[0])
    gap = float(oracles.distance(early, w)[0])

    ok = violations == 0 and lib_cx and oracle_cx
    report(capsys, 2, "positive inclusion", ok,
           f"B/IC/TC: {violations} violations in {checked} points; "
           f"BC counterexample witness outside earlier set by {gap:.3f} m")
    assert ok


def test_criterion_3_inclusion_chain(capsys, rng):
    violations = 0
    for _ in range(100):
        pose, goal = _aligned_pose_goal(rng)
        regions = [predict(k, pose, goal) for k in ("tc", "ic", "bc", "ball")]
        for inner, outer in zip(regions, regions[1:]):
            pts = _region_samples(inner, 10_000, rng)
            violations += int((~geo.contains_points(outer, pts, TOL)).sum())
    ok = violations == 0
    report(capsys, 3, "inclusion chain TC<=IC<=BC<=B", ok, f"{violations} violations over 100 poses")
    assert ok


def test_criterion_4_controller_properties(capsys, rng):
    failures = {"distance": 0, "alignment_time": 0, "alignment_persists": 0, "perpendicular": 0, "convergence": 0}
    for _ in range(100):
        pose, goal = random_pose(rng), random_goal(rng)
        traj = simulate_closed_loop(pose, goal, G, dt=0.01, horizon=60.0)
        xy = traj.states[:, :2]
        r = np.hypot(*(xy - goal).T)
        failures["distance"] += int((np.diff(r) > 1e-8).any())

        early = simulate_closed_loop(pose, goal, G, dt=0.01, horizon=1.0 / G.k_omega)
        if not early.converged:
            failures["alignment_time"] += int(goal_alignment(early.pose(len(early.times) - 1), goal) < -1e-9)

        align = np.array([goal_alignment(traj.pose(i), goal) for i in range(len(traj.times))])
        aligned = np.nonzero(align >= 0.0)[0]
        if len(aligned):
            tail = align[aligned[0]:]
            failures["alignment_persists"] += int((tail < -1e-9).any())
            perp = np.array([perpendicular_alignment_distance(traj.pose(i), goal)
                             for i in range(aligned[0], len(traj.times))])
            failures["perpendicular"] += int((np.diff(perp) > 1e-8).any())
        failures["convergence"] += int(not r[-1] < 1e-2)
    ok = not any(failures.values())
    report(capsys, 4, "controller properties", ok, ", ".join(f"{k}={v}" for k, v in failures.items()))
    assert ok


def test_criterion_5_safety_end_to_end(capsys, golden_scenarios, golden_logs):
    problems = []
    worst = math.inf
    for name in GOLDEN_SCENARIOS:
        sc = golden_scenarios[name]
        rho, k_gov = sc.environment.robot_radius, sc.gains.k_gov
        for p in ("ball", "bc", "ic", "tc", "fs"):
            lg = golden_logs.get(name, p)
            worst = min(worst, float(lg.clearance.min()) - rho)
            if lg.status != "reached":
                problems.append(f"{name}/{p} status={lg.status}")
            if not (lg.clearance > rho - 1e-6).all():
                problems.append(f"{name}/{p} clearance")
            if not (lg.governor_speed <= k_gov * lg.column("sigma") + 1e-9).all():
                problems.append(f"{name}/{p} governor speed")
    ok = not problems
    report(capsys, 5, "safety end-to-end", ok,
           "; ".join(problems) if problems else f"10 runs reached, min body gap {worst:.4f} m")
    assert ok


def test_criterion_6_speed_ordering(capsys, golden_logs):
    lines, ok = [], True
    for name in GOLDEN_SCENARIOS:
        v = {p: golden_logs.get(name, p).mean_speed for p in ("ball", "bc", "ic", "tc", "fs")}
        t = {p: golden_logs.get(name, p).travel_time for p in v}
        lo = 1.0 - SPEED_SLACK
        hi = 1.0 + SPEED_SLACK
        speed_ok = (v["fs"] >= lo * max(v["tc"], v["ic"]) and min(v["tc"], v["ic"]) >= lo * v["bc"]
                    and v["bc"] >= lo * v["ball"])
        time_ok = (t["fs"] <= hi * min(t["tc"], t["ic"]) and max(t["tc"], t["ic"]) <= hi * t["bc"]
                   and t["bc"] <= hi * t["ball"])
        ok &= speed_ok and time_ok
        lines.append(f"{name}: " + " ".join(f"{p}={v[p]:.3f}" for p in ("fs", "tc", "ic", "bc", "ball")))
    report(capsys, 6, "speed ordering", ok, "; ".join(lines))
    assert ok


def _random_region(kind, rng):
    pose, goal = random_pose(rng, 3.0), random_goal(rng, 3.0)
    if kind == "uc":
        return predict_unbounded(pose, goal)
    return predict(kind, pose, goal)


def test_criterion_7_segment_distance_oracle(capsys, rng):
    kinds = ("ball", "bc", "ic", "tc", "fs", "uc")
    worst = 0.0
    for k in range(500):
        region = _random_region(kinds[k % len(kinds)], rng)
        a = rng.uniform(-8, 8, 2)
        b = a + rng.uniform(-1, 1, 2) / math.sqrt(2) * rng.uniform(0, 8)
        lib = geo.segment_distance(region, Segment(tuple(a), tuple(b)))
        worst = max(worst, abs(lib - oracles.brute_segment_distance(region, a, b)))
    ok = worst <= 1e-4
    report(capsys, 7, "segment distance vs brute force", ok, f"max error {worst:.2e} over 500 pairs")
    assert ok


def test_criterion_8_integrator_convergence(capsys, golden_logs):
    gaps = {}
    for name in GOLDEN_SCENARIOS:
        coarse = golden_logs.get(name, "ic")
        fine = golden_logs.get(name, "ic", dt=0.005)
        gaps[name] = math.dist(coarse.final_position, fine.final_position)
    ok = all(g < 1e-4 for g in gaps.values())
    report(capsys, 8, "integrator convergence", ok, ", ".join(f"{k} {v:.2e} m" for k, v in gaps.items()))
    assert ok


def test_criterion_9_lipschitz(capsys, rng, golden_scenarios, golden_logs):
    bound = 10.0
    worst = {}
    for name in GOLDEN_SCENARIOS:
        env = golden_scenarios[name].environment
        rows = golden_logs.get(name, "ic").rows
        picks = rng.choice(len(rows), size=1000)
        dirs = rng.normal(size=(1000, 5))
        deltas = 1e-3 * dirs / np.linalg.norm(dirs, axis=1)[:, None]
        for kind in CONVEX_KINDS:
            ratio = 0.0
            for idx, d in zip(picks, deltas):
                s = rows[idx, 1:6]
                ratio = max(ratio, abs(_sigma(env, kind, s + d) - _sigma(env, kind, s)) / np.linalg.norm(d))
            worst[(name, kind)] = ratio
    top = max(worst.values())
    ok = top <= bound
    detail = f"max ratio {top:.2f} (L={bound:g}); " + ", ".join(f"{n}/{k}={r:.2f}" for (n, k), r in worst.items())
    report(capsys, 9, "Lipschitz sanity", ok, detail)
    assert ok


def _sigma(env, kind, s):
    pose, gov = Pose(s[0], s[1], s[2]), (s[3], s[4])
    return env.safety_level(predict(kind, pose, gov), pose.position)
