"""Command-line entry point: one subcommand per experiment.

Exit codes: 0 when every verdict passes, 1 when some verdict fails (or an
orbit was truncated), 2 on configuration, solver or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as ex
from .errors import BilliardError, ConfigError
from .io import (
    EXPERIMENT_PARAMS,
    RunConfig,
    body_outline,
    config_from_dict,
    write_orbit_csv,
    write_report_json,
    write_scatter_svg,
    write_table_csv,
)

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
MAX_TABLE_ROWS = 1000


def dispatch(config: RunConfig) -> ex.ExperimentReport:
    body = config.body.build()
    p = config.params
    s = config.settings
    seed = config.seed
    name = config.experiment
    if name == "orbit":
        return ex.orbit_experiment(body, p["x0"], p["steps"], seed, s)
    if name == "shadow":
        return ex.shadow_experiment(body, p["radii"], p["samples"], seed, settings=s)
    if name == "eps-decay":
        return ex.eps_decay_experiment(body, p["radii"], p["samples"], seed, settings=s)
    if name == "escape":
        every = max(1, p["steps"] // MAX_TABLE_ROWS)
        return ex.escape_experiment(body, p["x0"], p["steps"], seed=seed, settings=s, record_every=every)
    if name == "periodic":
        return ex.periodic_bound_experiment(body, p["k"], p["starts"], seed, settings=s)
    if name == "duality-check":
        return ex.duality_check(body, p["samples"], seed)
    if name == "constants":
        return ex.constants_experiment(body, p["samples"], p["k_list"], seed, s)
    if name == "demo":
        return ex.demo_constant_width(config.body.params["eps"], p["radius"], p["steps"], seed, s)
    raise ConfigError("experiment.name", f"unknown experiment {name!r}")


def _scatter_points(report):
    if report.orbit is not None:
        return report.orbit.points
    rows = report.tables.get("periodic")
    if rows:
        return [pt for r in rows for pt in r["points"]]
    return None


def write_outputs(config: RunConfig, report: ex.ExperimentReport) -> list[Path]:
    out = Path(config.output["dir"])
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if config.output["csv"]:
        if report.orbit is not None:
            write_orbit_csv(report.orbit, out / "orbit.csv")
            written.append(out / "orbit.csv")
        for tname, rows in report.tables.items():
            path = out / f"{tname}.csv"
            write_table_csv(rows, path)
            written.append(path)
    if config.output["json"]:
        write_report_json({"config": config.to_dict(), **report.to_dict()}, out / "report.json")
        written.append(out / "report.json")
    if config.output["svg"]:
        pts = _scatter_points(report)
        if pts is not None and len(pts):
            body = config.body.build()
            write_scatter_svg(pts, out / "scatter.svg", body_outline(body), {"experiment": report.name, "seed": report.seed})
            written.append(out / "scatter.svg")
    return written


def run(config: RunConfig, quiet: bool = False, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        report = dispatch(config)
    except BilliardError as e:
        print(f"error: {type(e).__name__}: {e}", file=stderr)
        state = getattr(e, "state", None)
        if state:
            print("state: " + json.dumps(state, default=float), file=stderr)
        return EXIT_ERROR
    write_outputs(config, report)
    if report.orbit is not None and report.orbit.failure is not None:
        print("orbit truncated: " + json.dumps(report.orbit.failure), file=stderr)
    for v in report.verdicts:
        if not v.passed:
            print(f"FAIL {v.name}: value={v.value!r} threshold={v.threshold!r} {v.detail}", file=stderr)
    if not quiet:
        for v in report.verdicts:
            print(f"{'PASS' if v.passed else 'FAIL'} {v.name}: {v.value!r} (threshold {v.threshold!r})", file=stdout)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--svg", action="store_true", help="also write scatter.svg")
    common.add_argument("--body", help="inline JSON body spec, e.g. '{\"kind\": \"pball\", \"p\": 1.5}'")
    common.add_argument("--quiet", action="store_true")
    parser = argparse.ArgumentParser(prog="outer-billiards", description="Outer symplectic billiards experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENT_PARAMS:
        sub.add_parser(name, parents=[common])
    return parser


def _load(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except OSError as e:
            raise ConfigError("config", str(e)) from None
        except json.JSONDecodeError as e:
            raise ConfigError("config", f"invalid JSON: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
    if args.body is not None:
        try:
            data["body"] = json.loads(args.body)
        except json.JSONDecodeError as e:
            raise ConfigError("body", f"invalid JSON: {e}") from None
    exp = dict(data.get("experiment") or {})
    if exp.get("name") not in (None, args.command):
        # the subcommand wins; parameters of another experiment are rejected by the schema
        exp = {k: v for k, v in exp.items() if k != "name"}
    exp["name"] = args.command
    data["experiment"] = exp
    if args.seed is not None:
        data["seed"] = args.seed
    if args.out is not None or args.svg:
        output = dict(data.get("output") or {})
        if args.out is not None:
            output["dir"] = args.out
        if args.svg:
            output["svg"] = True
        data["output"] = output
    return config_from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return run(config, quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())
