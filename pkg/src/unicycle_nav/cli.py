"""Command line interface: ``simulate`` one predictor or ``compare`` several.

Exit codes: 0 success, 1 simulation failure (rejected run or horizon
exhausted), 2 scenario validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .navigation import Scenario, SimulationRejected, TrajectoryLog, simulate
from .output import (
    ComparisonRow,
    scene_svg,
    speeds_svg,
    write_comparison_csv,
    write_svg,
    write_trajectory_csv,
)
from .prediction import PredictorKind
from .scenario_file import ScenarioError, ScenarioFile, load_scenario, validate_scenario

EXIT_OK, EXIT_SIM, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3
PREDICTORS = tuple(k.value for k in PredictorKind)

log = logging.getLogger(__name__)


def summary_line(name: str, lg: TrajectoryLog, robot_radius: float) -> str:
    row = ComparisonRow.from_log(lg, robot_radius)
    return (f"{name or 'scenario'} predictor={row.predictor} status={row.status} "
            f"time={row.travel_time:.3f}s mean_speed={row.mean_speed:.4f}m/s "
            f"min_clearance={row.min_clearance:.4f}m steps={row.steps}")


def _load(path: str) -> ScenarioFile:
    """Load without the predictor-dependent safety check; I/O errors propagate as OSError."""
    return load_scenario(path, check=False)


def _prepare_out(out: str) -> Path:
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _override(scenario: Scenario, dt: float | None, horizon: float | None) -> Scenario:
    changes = {}
    if dt is not None:
        changes["dt"] = dt
    if horizon is not None:
        changes["horizon"] = horizon
    return scenario.replace(**changes) if changes else scenario


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        sf = _load(args.scenario)
        scenario = _override(validate_scenario(sf, args.predictor), args.dt, args.horizon)
    except ScenarioError as err:
        print(f"error: invalid scenario ({err.rule}): {err}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as err:
        print(f"error: cannot read scenario: {err}", file=sys.stderr)
        return EXIT_IO
    try:
        lg = simulate(scenario)
    except SimulationRejected as err:
        print(f"error: simulation rejected: {err}", file=sys.stderr)
        return EXIT_INVALID
    try:
        out = _prepare_out(args.out)
        write_trajectory_csv(lg, out / "trajectory.csv")
        if sf.output.svg:
            write_svg(scene_svg(scenario, lg, sf.output.snapshot_interval), out / "scene.svg")
    except OSError as err:
        print(f"error: cannot write output: {err}", file=sys.stderr)
        return EXIT_IO
    print(summary_line(scenario.name, lg, scenario.environment.robot_radius))
    return EXIT_OK if lg.status == "reached" else EXIT_SIM


def _run_one(scenario: Scenario) -> TrajectoryLog | str:
    try:
        return simulate(scenario)
    except SimulationRejected as err:
        return f"rejected: {err}"


def run_comparison(scenario: Scenario, predictors: Sequence[str], jobs: int = 1
                   ) -> tuple[list[ComparisonRow], dict[str, TrajectoryLog]]:
    """Simulate ``scenario`` once per predictor; failed runs become ``rejected`` rows."""
    variants = [scenario.replace(predictor=p) for p in predictors]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, variants))
    else:
        results = [_run_one(v) for v in variants]
    rows, logs = [], {}
    for p, res in zip(predictors, results):
        if isinstance(res, str):
            log.warning("predictor %s: %s", p, res)
            rows.append(ComparisonRow.failed(p, "rejected"))
        else:
            rows.append(ComparisonRow.from_log(res, scenario.environment.robot_radius))
            logs.setdefault(p, res)
    return rows, logs


def _parse_predictor_list(text: str) -> list[str]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in items if s not in PREDICTORS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown predictor(s) {', '.join(bad)}; choose from {', '.join(PREDICTORS)}")
    if len(items) < 2:
        raise argparse.ArgumentTypeError("compare needs at least 2 predictors")
    return items


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        sf = _load(args.scenario)
        scenario = _override(validate_scenario(sf, check_safety=False), args.dt, args.horizon)
    except ScenarioError as err:
        print(f"error: invalid scenario ({err.rule}): {err}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as err:
        print(f"error: cannot read scenario: {err}", file=sys.stderr)
        return EXIT_IO
    rows, logs = run_comparison(scenario, args.predictors, jobs=args.jobs)
    try:
        out = _prepare_out(args.out)
        write_comparison_csv(rows, out / "comparison.csv")
        for p, lg in logs.items():
            write_trajectory_csv(lg, out / f"trajectory_{p}.csv")
        write_svg(speeds_svg(logs), out / "speeds.svg")
    except OSError as err:
        print(f"error: cannot write output: {err}", file=sys.stderr)
        return EXIT_IO
    for p, lg in logs.items():
        print(summary_line(scenario.name, lg, scenario.environment.robot_radius))
    for r in rows:
        if r.status == "rejected":
            print(f"{scenario.name or 'scenario'} predictor={r.predictor} status=rejected")
    return EXIT_OK if all(r.status == "reached" for r in rows) else EXIT_SIM


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unicycle-nav",
                                     description="Safe unicycle navigation with feedback motion prediction.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log warnings and diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario with one predictor")
    sim.add_argument("--scenario", required=True, help="scenario JSON file")
    sim.add_argument("--predictor", choices=PREDICTORS, default=None,
                     help="motion prediction (default: the scenario's)")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--dt", type=float, default=None, help="integration step in seconds")
    sim.add_argument("--horizon", type=float, default=None, help="simulated time limit in seconds")
    sim.set_defaults(func=cmd_simulate)

    cmp_ = sub.add_parser("compare", help="run one scenario with several predictors")
    cmp_.add_argument("--scenario", required=True, help="scenario JSON file")
    cmp_.add_argument("--predictors", required=True, type=_parse_predictor_list,
                      help="comma-separated list, e.g. ball,bc,ic,tc,fs")
    cmp_.add_argument("--out", required=True, help="output directory")
    cmp_.add_argument("--dt", type=float, default=None)
    cmp_.add_argument("--horizon", type=float, default=None)
    cmp_.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which matches the validation code
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    for opt in ("dt", "horizon"):
        val = getattr(args, opt, None)
        if val is not None and not val > 0.0:
            print(f"error: --{opt} must be positive", file=sys.stderr)
            return EXIT_INVALID
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
