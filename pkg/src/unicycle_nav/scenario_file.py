"""JSON scenario files: schema, parsing and load-time validation.

A scenario file looks like::

    {
      "name": "corridor",
      "environment": {
        "workspace": [[0, 0], [10, 0], [10, 6], [0, 6]],
        "obstacles": [[[0, 1.5], [8, 1.5], [8, 3], [0, 3]]],
        "robot_radius": 0.2
      },
      "gains": {"k_v": 1.0, "k_omega": 1.5, "k_path": 1.0, "k_gov": 4.0},
      "initial_pose": {"x": 0.75, "y": 0.75, "theta": 0.0},
      "initial_governor": {"x": 0.75, "y": 0.75},
      "path": [[0.75, 0.75], [9.2, 0.75], [9.2, 4.5], [0.75, 4.5]],
      "predictor": "ic",
      "integrator": {"dt": 0.01, "horizon": 120},
      "output": {"snapshot_interval": 0.5}
    }

Only ``environment``, ``initial_pose`` and ``path`` are required. Unknown keys
are rejected. ``initial_governor`` defaults to the first path waypoint.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .environment import Environment, InvalidEnvironment
from .navigation import NavGains, PathPolyline, Scenario, initial_safety_level
from .prediction import PredictorKind
from .unicycle import ControlGains, Pose

Vertex = tuple[float, float]


class ScenarioError(ValueError):
    """A scenario file failed to parse or validate.

    ``rule`` names the violated check ("schema", "json", "corridor-width",
    "waypoint-in-free-space", ...); ``location`` is the offending field path
    or ``line L, column C`` for malformed JSON.
    """

    def __init__(self, rule: str, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.rule = rule
        self.location = location


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class EnvironmentSpec(_Strict):
    workspace: list[Vertex] = Field(min_length=3)
    obstacles: list[list[Vertex]] = Field(default_factory=list)
    robot_radius: float

    @field_validator("robot_radius")
    @classmethod
    def _radius_positive(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError("robot_radius must be positive")
        return v


class GainsSpec(_Strict):
    k_v: float = Field(default=1.0, gt=0.0)
    k_omega: float = Field(default=1.5, gt=0.0)
    k_path: float = Field(default=1.0, gt=0.0)
    k_gov: float = Field(default=4.0, gt=0.0)


class PoseSpec(_Strict):
    x: float
    y: float
    theta: float = 0.0


class PointSpec(_Strict):
    x: float
    y: float


class IntegratorSpec(_Strict):
    dt: float = Field(default=0.01, gt=0.0)
    horizon: float = Field(default=120.0, gt=0.0)
    fs_dt: float = Field(default=0.05, gt=0.0)
    fs_horizon: float = Field(default=30.0, gt=0.0)


class OutputSpec(_Strict):
    snapshot_interval: float = Field(default=0.5, gt=0.0)
    svg: bool = True


class ScenarioFile(_Strict):
    name: str = ""
    environment: EnvironmentSpec
    gains: GainsSpec = GainsSpec()
    initial_pose: PoseSpec
    initial_governor: Optional[PointSpec] = None
    path: list[Vertex] = Field(min_length=2)
    predictor: Literal["ball", "bc", "ic", "tc", "fs"] = "ic"
    integrator: IntegratorSpec = IntegratorSpec()
    output: OutputSpec = OutputSpec()

    def build_environment(self) -> Environment:
        e = self.environment
        return Environment.from_vertices(e.workspace, e.obstacles, e.robot_radius)

    def to_scenario(self, predictor: str | PredictorKind | None = None, dt: float | None = None,
                    horizon: float | None = None) -> Scenario:
        g = self.gains
        gov = self.initial_governor
        governor = (gov.x, gov.y) if gov is not None else tuple(self.path[0])
        p = self.initial_pose
        return Scenario(
            environment=self.build_environment(),
            path=PathPolyline(self.path),
            initial_pose=Pose(p.x, p.y, p.theta),
            initial_governor=governor,
            gains=NavGains(ControlGains(g.k_v, g.k_omega), g.k_path, g.k_gov),
            predictor=PredictorKind(predictor or self.predictor),
            dt=dt if dt is not None else self.integrator.dt,
            horizon=horizon if horizon is not None else self.integrator.horizon,
            fs_dt=self.integrator.fs_dt,
            fs_horizon=self.integrator.fs_horizon,
            name=self.name,
        )


def _format_loc(loc: tuple) -> str:
    out = ""
    for item in loc:
        out += f"[{item}]" if isinstance(item, int) else (f".{item}" if out else str(item))
    return out


def _json_location(err: json.JSONDecodeError) -> str:
    return f"line {err.lineno}, column {err.colno}"


def parse_scenario(text: str, check: bool = True) -> ScenarioFile:
    """Parse and (optionally) validate scenario JSON text.

    Raises :class:`ScenarioError` on malformed JSON, schema violations or
    failed load-time checks.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError("json", err.msg, _json_location(err)) from None
    try:
        sf = ScenarioFile.model_validate(raw)
    except ValidationError as err:
        first = err.errors()[0]
        msg = first["msg"].removeprefix("Value error, ")
        raise ScenarioError("schema", msg, _format_loc(first["loc"])) from None
    if check:
        validate_scenario(sf)
    return sf


def load_scenario(path: str | Path, check: bool = True) -> ScenarioFile:
    return parse_scenario(Path(path).read_text(encoding="utf-8"), check=check)


def validate_scenario(sf: ScenarioFile, predictor: str | PredictorKind | None = None,
                      check_safety: bool = True) -> Scenario:
    """Run the load-time checks and return the simulation-ready scenario.

    The initial safety level depends on the predictor; ``check_safety=False``
    skips that check (used when several predictors share one file).
    """
    try:
        scenario = sf.to_scenario(predictor)
    except InvalidEnvironment as err:
        raise ScenarioError(err.rule, str(err), "environment") from None
    except ValueError as err:
        raise ScenarioError("geometry", str(err)) from None
    env = scenario.environment
    try:
        env.validate()
    except InvalidEnvironment as err:
        raise ScenarioError(err.rule, str(err), "environment") from None
    for i, w in enumerate(sf.path):
        if not env.in_free_space(w):
            raise ScenarioError("waypoint-in-free-space",
                                f"path waypoint {i} {tuple(w)} is not in the free space interior",
                                f"path[{i}]")
    if not env.in_free_space(scenario.initial_pose.position):
        raise ScenarioError("pose-in-free-space", "initial pose is not in the free space", "initial_pose")
    if not env.in_free_space(scenario.initial_governor):
        raise ScenarioError("governor-in-free-space", "initial governor is not in the free space",
                            "initial_governor")
    if check_safety and not initial_safety_level(scenario) > 0.0:
        raise ScenarioError("initial-safety-level",
                            f"initial safety level for predictor '{scenario.predictor.value}' "
                            "must be strictly positive", "initial_governor")
    return scenario


GOLDEN_SCENARIOS = ("corridor", "office")


def golden_scenario_path(name: str) -> Path:
    """Path of a scenario file shipped with the package (``corridor``, ``office``, ...)."""
    p = Path(__file__).with_name("scenarios") / f"{name}.json"
    if not p.is_file():
        raise FileNotFoundError(f"no shipped scenario named {name!r}")
    return p
