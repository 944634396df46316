import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from unicycle_nav.navigation import simulate  # noqa: E402
from unicycle_nav.scenario_file import (  # noqa: E402
    GOLDEN_SCENARIOS,
    golden_scenario_path,
    load_scenario,
    validate_scenario,
)
from unicycle_nav.unicycle import Pose  # noqa: E402

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

PREDICTORS = ("ball", "bc", "ic", "tc", "fs")


def random_pose(rng, spread=5.0):
    x, y = rng.uniform(-spread, spread, 2)
    return Pose(float(x), float(y), float(rng.uniform(-math.pi, math.pi)))


def random_goal(rng, spread=5.0):
    x, y = rng.uniform(-spread, spread, 2)
    return (float(x), float(y))


@pytest.fixture(scope="session")
def golden_scenarios():
    return {name: validate_scenario(load_scenario(golden_scenario_path(name), check=False), check_safety=False)
            for name in GOLDEN_SCENARIOS}


class _LogCache:
    """Simulations of the shipped scenarios, computed once per session on demand."""

    def __init__(self, scenarios):
        self.scenarios = scenarios
        self._logs = {}

    def get(self, name, predictor, dt=None):
        key = (name, predictor, dt)
        if key not in self._logs:
            sc = self.scenarios[name].replace(predictor=predictor)
            if dt is not None:
                sc = sc.replace(dt=dt)
            self._logs[key] = simulate(sc)
        return self._logs[key]


@pytest.fixture(scope="session")
def golden_logs(golden_scenarios):
    return _LogCache(golden_scenarios)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
