"""Run configuration schema and the CSV / JSON / SVG writers."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .bodies import BodySpec, ConvexBody
from .dynamics import SolverSettings, OrbitRecord
from .errors import ConfigError, ValidationError

FLOAT_FMT = "%.17g"

# parameter defaults per experiment; ``None`` marks a body-dependent default
EXPERIMENT_PARAMS: dict[str, dict[str, Any]] = {
    "orbit": {"x0": None, "steps": 100},
    "shadow": {"radii": [10.0, 20.0, 40.0, 80.0, 160.0], "samples": 64},
    "eps-decay": {"radii": [10.0, 20.0, 40.0, 80.0, 160.0], "samples": 64},
    "escape": {"x0": None, "steps": 1000},
    "periodic": {"k": 3, "starts": 200},
    "duality-check": {"samples": 200},
    "constants": {"samples": 400, "k_list": [3, 5, 7]},
    "demo": {"radius": 100.0, "steps": 2000},
}

_TOP_KEYS = ("body", "experiment", "seed", "solver", "output")
_OUTPUT_DEFAULTS = {"dir": "out", "csv": True, "json": True, "svg": False}
_SOLVER_TYPES = {
    "residual_tol": float,
    "max_iter": int,
    "warm_start": bool,
    "fallback_grid": int,
    "outside_margin": float,
    "flow_tol": float,
}


@dataclass
class RunConfig:
    body: BodySpec
    experiment: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    solver: dict = field(default_factory=lambda: SolverSettings().to_dict())
    output: dict = field(default_factory=lambda: dict(_OUTPUT_DEFAULTS))

    @property
    def settings(self) -> SolverSettings:
        return SolverSettings(**self.solver)

    def to_dict(self) -> dict:
        return {
            "body": self.body.to_dict(),
            "experiment": {"name": self.experiment, **self.params},
            "seed": self.seed,
            "solver": dict(self.solver),
            "output": dict(self.output),
        }


def _int(value, name, lo=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(name, "must be an integer")
    value = int(value)
    if lo is not None and value < lo:
        raise ConfigError(name, f"must be >= {lo}")
    return value


def _real(value, name, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(name, "must be a finite number")
    if positive and value <= 0:
        raise ConfigError(name, "must be positive")
    return float(value)


def _real_list(value, name, positive=False, length=None):
    if not isinstance(value, list) or not value:
        raise ConfigError(name, "must be a non-empty list")
    if length is not None and len(value) != length:
        raise ConfigError(name, f"must have length {length}")
    return [_real(v, f"{name}[{i}]", positive) for i, v in enumerate(value)]


def _default_x0(name, dim):
    if name == "orbit":
        return [20.0] + [0.0] * (dim - 1)
    # escape: off every coordinate plane, so the orbit is not confined to one
    return [50.0 / math.sqrt(dim)] * dim


def _experiment_params(name, given, body: BodySpec) -> dict:
    schema = EXPERIMENT_PARAMS[name]
    for key in given:
        if key not in schema:
            raise ConfigError(f"experiment.{key}", f"unknown parameter for {name}")
    p = {**schema, **given}
    dim = body.build().dim
    out = {}
    for key, value in p.items():
        where = f"experiment.{key}"
        if key == "x0":
            out[key] = _default_x0(name, dim) if value is None else _real_list(value, where, length=dim)
        elif key == "radii":
            out[key] = _real_list(value, where, positive=True)
        elif key == "k_list":
            if not isinstance(value, list) or not value:
                raise ConfigError(where, "must be a non-empty list")
            out[key] = [_int(v, f"{where}[{i}]", 1) for i, v in enumerate(value)]
        elif key == "radius":
            out[key] = _real(value, where, positive=True)
        elif key == "samples":
            out[key] = _int(value, where, 100 if name == "constants" else 1)
        elif key == "steps":
            out[key] = _int(value, where, 1 if name == "escape" else 0)
        else:
            out[key] = _int(value, where, 1)
    if name == "demo" and body.kind != "constant_width_2d":
        raise ConfigError("body.kind", "demo requires a constant_width_2d body")
    return out


def _solver(given) -> dict:
    if not isinstance(given, dict):
        raise ConfigError("solver", "must be an object")
    out = SolverSettings().to_dict()
    for key, value in given.items():
        if key not in _SOLVER_TYPES:
            raise ConfigError(f"solver.{key}", "unknown solver setting")
        kind = _SOLVER_TYPES[key]
        if kind is bool:
            if not isinstance(value, bool):
                raise ConfigError(f"solver.{key}", "must be a boolean")
            out[key] = value
        elif kind is int:
            out[key] = _int(value, f"solver.{key}")
        else:
            out[key] = _real(value, f"solver.{key}")
    try:
        SolverSettings(**out)
    except ValueError as e:
        raise ValidationError("solver", str(e)) from None
    return out


def _output(given) -> dict:
    if not isinstance(given, dict):
        raise ConfigError("output", "must be an object")
    out = dict(_OUTPUT_DEFAULTS)
    for key, value in given.items():
        if key not in out:
            raise ConfigError(f"output.{key}", "unknown output field")
        if key == "dir":
            if not isinstance(value, str) or not value:
                raise ConfigError("output.dir", "must be a non-empty string")
        elif not isinstance(value, bool):
            raise ConfigError(f"output.{key}", "must be a boolean")
        out[key] = value
    return out


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object")
    for key in data:
        if key not in _TOP_KEYS:
            raise ConfigError(key, "unknown field")
    if "body" not in data:
        raise ConfigError("body", "missing")
    if "experiment" not in data:
        raise ConfigError("experiment", "missing")
    body = BodySpec.from_dict(data["body"])
    exp = data["experiment"]
    if not isinstance(exp, dict):
        raise ConfigError("experiment", "must be an object")
    name = exp.get("name")
    if name not in EXPERIMENT_PARAMS:
        raise ConfigError("experiment.name", f"expected one of {sorted(EXPERIMENT_PARAMS)}")
    params = _experiment_params(name, {k: v for k, v in exp.items() if k != "name"}, body)
    seed = _int(data.get("seed", 0), "seed")
    return RunConfig(body, name, params, seed, _solver(data.get("solver", {})), _output(data.get("output", {})))


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"invalid JSON: {e}") from None
    return config_from_dict(data)


# --------------------------------------------------------------------------
# writers


def _fmt(x) -> str:
    return FLOAT_FMT % x


def write_orbit_csv(record: OrbitRecord, path) -> None:
    """One row per point; ``m`` is the second reflection point of the step producing it."""
    pts = record.points
    dim = pts.shape[1]
    header = ["k"] + [f"x_{i + 1}" for i in range(dim)] + ["H", "eucl_norm"] + [f"m_{i + 1}" for i in range(dim)] + ["residual"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k, x in enumerate(pts):
            if k == 0:
                m = [math.nan] * dim
                res = 0.0
            else:
                m = record.tangency[k - 1, 1]
                res = record.residuals[k - 1]
            row = [str(k)] + [_fmt(c) for c in x] + [_fmt(record.H_values[k]), _fmt(np.linalg.norm(x))] + [_fmt(c) for c in m] + [_fmt(res)]
            w.writerow(row)


def read_orbit_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(c) for c in r] for r in rows[1:]]).reshape(len(rows) - 1, len(rows[0]))


def write_table_csv(rows: list[dict], path) -> None:
    """Scalar columns of ``rows``; list-valued entries live in the JSON report only."""
    if not rows:
        cols = []
    else:
        cols = [k for k, v in rows[0].items() if not isinstance(v, (list, tuple, dict))]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r[c]) if isinstance(r[c], float) else str(r[c]) for c in cols])


def write_report_json(report_dict: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(report_dict, fh, indent=2)
        fh.write("\n")


def body_outline(body: ConvexBody, n: int = 256) -> np.ndarray:
    """Support points of normals in the first coordinate plane, projected to it."""
    out = np.empty((n, 2))
    for i, t in enumerate(np.linspace(0.0, 2 * math.pi, n, endpoint=False)):
        v = np.zeros(body.dim)
        v[0], v[1] = math.cos(t), math.sin(t)
        out[i] = body.grad_h(v)[:2]
    return out


def write_scatter_svg(points, path, outline=None, annotations: dict | None = None, size: int = 600) -> None:
    """Scatter of the first two coordinates with an optional outline, drawn to scale."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))[:, :2]
    if len(pts) < 1:
        raise ValueError("need at least one point")
    allpts = pts if outline is None else np.vstack([pts, outline])
    half = max(float(np.abs(allpts).max()), 1e-12) * 1.05
    scale = (size / 2) / half

    def xy(p):
        return f"{size / 2 + scale * p[0]:.3f}", f"{size / 2 - scale * p[1]:.3f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if outline is not None:
        poly = " ".join(",".join(xy(p)) for p in outline)
        lines.append(f'<polygon points="{poly}" fill="black" stroke="black" stroke-width="0.5"/>')
    for p in pts:
        cx, cy = xy(p)
        lines.append(f'<circle cx="{cx}" cy="{cy}" r="1.2" fill="steelblue"/>')
    for i, (k, v) in enumerate(sorted((annotations or {}).items())):
        lines.append(f'<text x="8" y="{16 + 14 * i}" font-family="monospace" font-size="11">{k}: {v}</text>')
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")
