"""Unicycle feedback motion prediction and reference-governor navigation."""

from .environment import ClearanceReport, Environment, InvalidEnvironment
from .geometry import (
    Ball,
    BoundedCone,
    HalfPlane,
    IceCreamCone,
    PaddedPolyline,
    Polygon,
    Segment,
    SolidCone,
    TruncatedIceCreamCone,
)
from .navigation import NavGains, PathPolyline, Scenario, SimulationRejected, TrajectoryLog, simulate
from .prediction import PredictorKind, predict
from .unicycle import ControlGains, ControlInput, Pose

__version__ = "0.1.0"

__all__ = [
    "Ball", "BoundedCone", "ClearanceReport", "ControlGains", "ControlInput", "Environment",
    "HalfPlane", "IceCreamCone", "InvalidEnvironment", "NavGains", "PaddedPolyline", "PathPolyline",
    "Polygon", "Pose", "PredictorKind", "Scenario", "Segment", "SimulationRejected", "SolidCone",
    "TrajectoryLog", "TruncatedIceCreamCone", "predict", "simulate",
]
