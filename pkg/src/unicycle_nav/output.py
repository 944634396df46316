"""CSV and SVG output for simulation runs and predictor comparisons."""

from __future__ import annotations

import csv
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import geometry as geo
from .navigation import COLUMNS, Scenario, TrajectoryLog
from .prediction import predict
from .unicycle import Pose

DECIMALS = 9
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def fmt(x: float) -> str:
    s = f"{x:.{DECIMALS}f}"
    # keep goldens stable: no negative zero
    return s[1:] if s.startswith("-") and float(s) == 0.0 else s


# -- trajectory CSV ---------------------------------------------------------


def write_trajectory_csv(log: TrajectoryLog, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in log.rows:
            w.writerow([fmt(v) for v in row])


def read_trajectory_csv(path: str | Path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise ValueError(f"unexpected header {header!r}")
        rows = [[float(v) for v in r] for r in reader if r]
    return np.asarray(rows, dtype=float).reshape(-1, len(COLUMNS))


# -- comparison report ------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    predictor: str
    status: str
    travel_time: float
    mean_speed: float
    min_clearance: float  # smallest gap between the robot body and the obstacles
    steps: int

    @classmethod
    def from_log(cls, log: TrajectoryLog, robot_radius: float) -> "ComparisonRow":
        return cls(log.predictor, log.status, log.travel_time, log.mean_speed,
                   float(log.clearance.min()) - robot_radius, len(log.rows))

    @classmethod
    def failed(cls, predictor: str, status: str) -> "ComparisonRow":
        nan = float("nan")
        return cls(predictor, status, nan, nan, nan, 0)


REPORT_COLUMNS = ("predictor", "status", "travel_time", "mean_speed", "min_clearance", "steps")


def write_comparison_csv(rows: Sequence[ComparisonRow], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in rows:
            w.writerow([r.predictor, r.status, fmt(r.travel_time), fmt(r.mean_speed),
                        fmt(r.min_clearance), r.steps])


def read_comparison_csv(path: str | Path) -> list[ComparisonRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [ComparisonRow(d["predictor"], d["status"], float(d["travel_time"]),
                              float(d["mean_speed"]), float(d["min_clearance"]), int(d["steps"]))
                for d in csv.DictReader(fh)]


# -- SVG --------------------------------------------------------------------


def _points_attr(pts) -> str:
    return " ".join(f"{x:.4f},{y:.4f}" for x, y in pts)


def _hull_order(pts: np.ndarray) -> np.ndarray:
    """Order boundary samples of a convex set counterclockwise around their centroid."""
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    return pts[np.argsort(ang)]


def region_elements(region: geo.Region, style: Mapping[str, str]) -> list[ET.Element]:
    """SVG shapes outlining a bounded prediction region."""
    if isinstance(region, geo.PaddedPolyline):
        attrs = {"points": _points_attr(region.points), "fill": "none",
                 "stroke-width": f"{max(2.0 * region.pad, 1e-3):.4f}",
                 "stroke-linecap": "round", "stroke-linejoin": "round",
                 "stroke": style.get("fill", "none"), "stroke-opacity": style.get("fill-opacity", "1")}
        return [ET.Element("polyline", attrs)]
    out = []
    for part in geo._union_parts(region):
        if isinstance(part, geo.Ball):
            cx, cy = part.center
            out.append(ET.Element("circle", {"cx": f"{cx:.4f}", "cy": f"{cy:.4f}",
                                             "r": f"{part.radius:.4f}", **style}))
        else:
            pts = _hull_order(geo.sample_boundary(part, 96))
            out.append(ET.Element("polygon", {"points": _points_attr(pts), **style}))
    return out


def _svg_root(bounds: tuple[float, float, float, float], width_px: int = 800) -> tuple[ET.Element, ET.Element]:
    """Root element with viewBox on ``bounds`` and a y-up group to draw into."""
    x0, y0, x1, y1 = bounds
    w, h = x1 - x0, y1 - y0
    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "viewBox": f"{x0:g} {y0:g} {w:g} {h:g}",
        "width": str(width_px), "height": str(int(round(width_px * h / w))),
    })
    layer = ET.SubElement(root, "g", {"transform": f"matrix(1 0 0 -1 0 {y0 + y1:g})"})
    return root, layer


def snapshot_indices(times: np.ndarray, interval: float) -> list[int]:
    """Row indices of the first logged step at or after each multiple of ``interval``."""
    if len(times) == 0:
        return []
    out = []
    k = 0
    while k * interval <= times[-1] + 1e-9:
        i = int(np.searchsorted(times, k * interval - 1e-9))
        if i < len(times) and (not out or out[-1] != i):
            out.append(i)
        k += 1
    return out


def scene_svg(scenario: Scenario, log: TrajectoryLog, snapshot_interval: float = 0.5) -> ET.ElementTree:
    env = scenario.environment
    bounds = env.workspace.bounds()
    root, g = _svg_root(bounds)
    ET.SubElement(root, "title").text = f"{scenario.name or 'scenario'} ({log.predictor})"
    lw = 0.003 * max(bounds[2] - bounds[0], bounds[3] - bounds[1])
    ET.SubElement(g, "polygon", {"points": _points_attr(env.workspace.vertices), "fill": "#ffffff",
                                 "stroke": "#000000", "stroke-width": f"{2 * lw:.4f}", "class": "workspace"})
    for obs in env.obstacles:
        ET.SubElement(g, "polygon", {"points": _points_attr(obs.vertices), "fill": "#808080",
                                     "stroke": "#000000", "stroke-width": f"{lw:.4f}", "class": "obstacle"})
    ET.SubElement(g, "polyline", {"points": _points_attr(scenario.path.waypoints), "fill": "none",
                                  "stroke": "#2ca02c", "stroke-width": f"{lw:.4f}",
                                  "stroke-dasharray": f"{3 * lw:.4f}", "class": "path"})

    snaps = ET.SubElement(g, "g", {"class": "predictions"})
    style = {"fill": "#ffbf00", "fill-opacity": "0.15", "stroke": "#cc8800", "stroke-width": f"{0.5 * lw:.4f}"}
    gains = scenario.gains.gains
    for i in snapshot_indices(log.times, snapshot_interval):
        t, x, y, th, gx, gy = log.rows[i, :6]
        region = predict(scenario.predictor, Pose(x, y, th), (gx, gy), gains,
                         fs_dt=scenario.fs_dt, fs_horizon=scenario.fs_horizon)
        for el in region_elements(region, style):
            el.set("data-t", f"{t:.2f}")
            snaps.append(el)

    xy = log.rows[:, 1:3]
    gov = log.rows[:, 4:6]
    ET.SubElement(g, "polyline", {"points": _points_attr(gov), "fill": "none", "stroke": "#d62728",
                                  "stroke-width": f"{lw:.4f}", "class": "governor"})
    ET.SubElement(g, "polyline", {"points": _points_attr(xy), "fill": "none", "stroke": "#1f77b4",
                                  "stroke-width": f"{lw:.4f}", "class": "robot"})
    x, y = xy[-1]
    ET.SubElement(g, "circle", {"cx": f"{x:.4f}", "cy": f"{y:.4f}", "r": f"{env.robot_radius:.4f}",
                                "fill": "#1f77b4", "fill-opacity": "0.5", "class": "robot-final"})
    return ET.ElementTree(root)


def speeds_svg(logs: Mapping[str, TrajectoryLog]) -> ET.ElementTree:
    """Speed against time, one line per predictor."""
    t_max = max((lg.travel_time for lg in logs.values()), default=1.0) or 1.0
    v_max = max((float(lg.column("v").max()) for lg in logs.values() if len(lg.rows)), default=1.0) or 1.0
    v_top = math.ceil(v_max * 10.0) / 10.0
    w, h, m = 800.0, 400.0, 50.0

    def sx(t):
        return m + (w - 2 * m) * t / t_max

    def sy(v):
        return h - m - (h - 2 * m) * v / v_top

    root = ET.Element("svg", {"xmlns": "http://www.w3.org/2000/svg", "viewBox": f"0 0 {w:g} {h:g}",
                              "width": f"{w:g}", "height": f"{h:g}"})
    ET.SubElement(root, "title").text = "speed profiles"
    ET.SubElement(root, "line", {"x1": f"{m}", "y1": f"{h - m}", "x2": f"{w - m}", "y2": f"{h - m}",
                                 "stroke": "#000000"})
    ET.SubElement(root, "line", {"x1": f"{m}", "y1": f"{m}", "x2": f"{m}", "y2": f"{h - m}", "stroke": "#000000"})
    ET.SubElement(root, "text", {"x": f"{w / 2:g}", "y": f"{h - 10:g}", "text-anchor": "middle"}).text = "time (s)"
    ET.SubElement(root, "text", {"x": "15", "y": f"{h / 2:g}", "transform": f"rotate(-90 15 {h / 2:g})",
                                 "text-anchor": "middle"}).text = "speed (m/s)"
    for k in range(5):
        t = t_max * k / 4
        ET.SubElement(root, "text", {"x": f"{sx(t):.1f}", "y": f"{h - m + 18:g}", "text-anchor": "middle",
                                     "font-size": "11"}).text = f"{t:.1f}"
        v = v_top * k / 4
        ET.SubElement(root, "text", {"x": f"{m - 6:g}", "y": f"{sy(v) + 4:.1f}", "text-anchor": "end",
                                     "font-size": "11"}).text = f"{v:.2f}"
    for i, (name, lg) in enumerate(logs.items()):
        colour = PALETTE[i % len(PALETTE)]
        step = max(1, len(lg.rows) // 2000)
        pts = [(sx(t), sy(v)) for t, v in zip(lg.times[::step], lg.column("v")[::step])]
        ET.SubElement(root, "polyline", {"points": " ".join(f"{a:.2f},{b:.2f}" for a, b in pts),
                                         "fill": "none", "stroke": colour, "stroke-width": "1.5",
                                         "class": f"speed-{name}"})
        ET.SubElement(root, "text", {"x": f"{w - m - 5:g}", "y": f"{m + 15 * i:g}", "text-anchor": "end",
                                     "fill": colour, "font-size": "12"}).text = name
    return ET.ElementTree(root)


def write_svg(tree: ET.ElementTree, path: str | Path) -> None:
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)
