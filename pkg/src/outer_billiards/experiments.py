"""Verification harness for the shadowing, escape and periodic-orbit bounds.

Every experiment returns an :class:`ExperimentReport` whose tables and
verdicts depend only on ``(body, parameters, seed)``; nothing time- or
machine-dependent is recorded, so re-runs serialize to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bodies import ConvexBody
from .duality import (
    check_involution,
    hamiltonian,
    is_positively_proportional,
    n_minus,
    n_plus,
    reeb,
    reeb_at_normal,
)
from .dynamics import (
    DEFAULT_SETTINGS,
    OrbitRecord,
    SolverSettings,
    T2,
    integrate_flow,
    orbit,
    periodic_search,
    reflect_minus,
    symplecticity_defect,
)
from .errors import DomainError, EstimationError
from .geometry import apply_J, omega, sphere_sample
from .oracles import numeric_gradient, numeric_hamiltonian_field, numeric_support_point

# radius grids are multiples of the diameter so that every estimate is scale-equivariant
DELTA_GRID = (2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0)
TAYLOR_GRID = (1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)
TAYLOR_GROWTH = 1.05


@dataclass
class Verdict:
    name: str
    passed: bool
    value: float
    threshold: float | str
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.value = _num(self.value)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "value": _num(self.value), "threshold": _num(self.threshold), "detail": self.detail}


def _num(x):
    if isinstance(x, (np.floating, np.integer)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


@dataclass
class ExperimentReport:
    name: str
    body: dict
    seed: int
    params: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    truncated: bool = False
    orbit: OrbitRecord | None = None

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "experiment": self.name,
            "body": self.body,
            "seed": self.seed,
            "params": _jsonable(self.params),
            "truncated": self.truncated,
            "passed": self.passed,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "summary": _jsonable(self.summary),
            "tables": _jsonable(self.tables),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return _num(obj)


def _body_echo(body: ConvexBody) -> dict:
    return body.spec.to_dict() if body.spec is not None else {"kind": type(body).__name__, "dim": body.dim}


# --------------------------------------------------------------------------
# constants


@dataclass
class ConstantsReport:
    """Sampled estimates of the constants entering the three bounds.

    ``ell`` and ``eta`` are statistical estimates (sampled extrema), the
    thresholds ``delta_inv`` and ``delta_tilde_inv`` are read off radius grids;
    ``C``, ``Delta_inv``, ``C_bar`` and ``rho`` are assembled from them.
    """

    C1: float
    ell: float
    C: float
    delta_inv: float
    C_tilde: float
    delta_tilde_inv: float
    m: float
    eta: float
    mu: float
    Delta_inv: float
    C_bar: float
    grids: dict = field(default_factory=dict)

    def rho(self, k: int) -> float:
        return max(self.delta_inv + 2 * (k - 1) * self.C1, 2 * (k - 1) * self.C1 / self.eta, 24 * self.C / self.m)

    rho_of_k = rho

    def shadow_bound(self, r: float) -> float:
        return (6 * self.C + self.C_tilde) / r

    def to_dict(self, k_list: Sequence[int] = (3, 5, 7)) -> dict:
        return {
            "C1": self.C1,
            "ell": self.ell,
            "C": self.C,
            "delta_inv": self.delta_inv,
            "C_tilde": self.C_tilde,
            "delta_tilde_inv": self.delta_tilde_inv,
            "m": self.m,
            "eta": self.eta,
            "mu": self.mu,
            "Delta_inv": self.Delta_inv,
            "C_bar": self.C_bar,
            "rho": {str(k): self.rho(k) for k in k_list},
            "grids": _jsonable(self.grids),
        }


def c_bar(mu: float, C: float, C_tilde: float, Delta_inv: float) -> float:
    a = 6 * C + C_tilde
    Delta = 1.0 / Delta_inv
    return 2 * mu**2 * a + 3 * mu**2 * a**2 * Delta**2


def estimate_ell(body: ConvexBody, samples: int, seed: int) -> float:
    """Minimum of (angle between normals) / (distance of support points) over close pairs."""
    rng = np.random.default_rng(seed + 1)
    vs = sphere_sample(body.dim, samples, seed + 2)
    angles = 10.0 ** rng.uniform(-3.0, -1.0, size=samples)
    tangents = sphere_sample(body.dim, samples, seed + 3)
    best = math.inf
    for v, th, e in zip(vs, angles, tangents):
        e = e - np.dot(e, v) * v
        ne = np.linalg.norm(e)
        if ne < 1e-8:
            continue
        w = math.cos(th) * v + math.sin(th) * e / ne
        dist = float(np.linalg.norm(body.grad_h(v) - body.grad_h(w)))
        if dist > 0:
            best = min(best, th / dist)
    return float(best)


def estimate_m(H, samples: int, seed: int) -> float:
    vs = np.vstack([np.eye(H.dim), -np.eye(H.dim), sphere_sample(H.dim, samples, seed + 4)])
    return float(min(np.linalg.norm(H.shadow(v)) for v in vs))


def estimate_eta(H, m: float, samples: int, seed: int, iters: int = 40) -> tuple[float, dict]:
    """Largest sampled ``eta <= 1/2`` with ``|V(x) - V(y)| < m/2`` for ``|x - y| < eta`` in the shell."""
    rng = np.random.default_rng(seed + 5)
    xs = sphere_sample(H.dim, samples, seed + 6) * rng.uniform(0.5, 1.5, size=samples)[:, None]
    us = sphere_sample(H.dim, samples, seed + 7) * rng.uniform(0.0, 1.0, size=samples)[:, None]
    Vx = np.array([H.shadow(x) for x in xs])

    def modulus(eta):
        ys = xs + eta * us
        r = np.linalg.norm(ys, axis=1)
        keep = (r >= 0.5) & (r <= 1.5)
        if not np.any(keep):
            return 0.0
        return max(float(np.linalg.norm(H.shadow(y) - vx)) for y, vx in zip(ys[keep], Vx[keep]))

    target = m / 2
    if modulus(0.5) < target:
        return 0.5, {"bracket": [0.5, 0.5], "modulus": modulus(0.5), "pairs": samples}
    lo = 0.25
    while modulus(lo) >= target:
        lo /= 2
        if lo < 1e-8:
            raise EstimationError("eta bisection: no admissible radius found at sampling resolution")
    hi = 2 * lo
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if modulus(mid) < target:
            lo = mid
        else:
            hi = mid
    return lo, {"bracket": [lo, hi], "modulus": modulus(lo), "pairs": samples}


def _alpha(body, x, settings):
    """Angle between the normals at ``n_-(x)`` and ``m_-(x)``."""
    vn = apply_J(x) / np.linalg.norm(x)
    vm = reflect_minus(body, x, settings).v
    return math.acos(max(-1.0, min(1.0, float(np.dot(vn, vm)))))


def estimate_delta_inv(body, C1, dirs, settings) -> tuple[float, dict]:
    radii = [g * C1 for g in DELTA_GRID]
    worst = []
    for r in radii:
        a = 0.0
        for w in dirs:
            x = r * w
            a = max(a, _alpha(body, x, settings))
            y = 2 * reflect_minus(body, x, settings).m - x
            a = max(a, _alpha(body, y, settings))
        worst.append(a)
    ok_from = len(radii)
    for j in range(len(radii) - 1, -1, -1):
        if worst[j] <= math.pi / 2:
            ok_from = j
        else:
            break
    if ok_from == len(radii):
        raise EstimationError("tangency angle never drops below pi/2 on the radius grid")
    return max(2 * C1, radii[ok_from]), {"radii": radii, "max_alpha": worst}


def estimate_taylor(H, C1, dirs, tol) -> tuple[float, float, dict]:
    """``C_tilde`` and ``1/delta_tilde`` from ``g(r) = r max |phi_1(x) - x - V(x)|``."""
    radii = [g * C1 for g in TAYLOR_GRID]
    g = []
    for r in radii:
        worst = 0.0
        for w in dirs:
            x = r * w
            fx = integrate_flow(H, x, 1.0, tol).x
            worst = max(worst, float(np.linalg.norm(fx - x - H.shadow(x))))
        g.append(r * worst)
    start = len(radii) - 1
    for j in range(len(radii)):
        if all(g[i] <= TAYLOR_GROWTH * g[j] for i in range(j + 1, len(radii))):
            start = j
            break
    return max(g[start:]), radii[start], {"radii": radii, "r_times_residual": g, "growth_tol": TAYLOR_GROWTH}


def constants_estimate(body: ConvexBody, samples: int = 400, k_list: Sequence[int] = (3,), seed: int = 0, settings: SolverSettings = DEFAULT_SETTINGS) -> ConstantsReport:
    if samples < 100:
        raise ValueError("samples must be >= 100")
    H = hamiltonian(body)
    C1 = body.diameter(max(samples, 2000), seed)
    ell = estimate_ell(body, samples * 5, seed)
    C = 6 * C1 / ell
    m = estimate_m(H, samples * 5, seed)
    eta, eta_info = estimate_eta(H, m, samples * 5, seed)
    mu = H.mu
    dirs = sphere_sample(body.dim, 16 * (body.dim - 1), seed + 9)
    delta_inv, delta_info = estimate_delta_inv(body, C1, dirs, settings)
    C_tilde, delta_tilde_inv, taylor_info = estimate_taylor(H, C1, dirs, settings.flow_tol)
    Delta_inv = max(delta_inv, delta_tilde_inv)
    return ConstantsReport(
        C1=C1,
        ell=ell,
        C=C,
        delta_inv=delta_inv,
        C_tilde=C_tilde,
        delta_tilde_inv=delta_tilde_inv,
        m=m,
        eta=eta,
        mu=mu,
        Delta_inv=Delta_inv,
        C_bar=c_bar(mu, C, C_tilde, Delta_inv),
        grids={"delta": delta_info, "taylor": taylor_info, "eta": eta_info, "ell": "sampled minimum over close pairs (statistical)"},
    )


def constants_experiment(body, samples=400, k_list=(3, 5, 7), seed=0, settings=DEFAULT_SETTINGS) -> ExperimentReport:
    c = constants_estimate(body, samples, k_list, seed, settings)
    entries = [c.C1, c.ell, c.C, c.delta_inv, c.C_tilde, c.m, c.eta, c.mu, c.Delta_inv, c.C_bar]
    rhos = [c.rho(k) for k in k_list]
    verdicts = [
        Verdict("positive", all(e > 0 for e in entries), min(entries), "> 0"),
        Verdict("eta_le_half", c.eta <= 0.5, c.eta, 0.5),
        Verdict("C_bar_identity", c.C_bar == c_bar(c.mu, c.C, c.C_tilde, c.Delta_inv), c.C_bar, "exact"),
        Verdict("rho_monotone", all(a <= b for a, b in zip(rhos, rhos[1:])), len(rhos), "nondecreasing"),
    ]
    return ExperimentReport("constants", _body_echo(body), seed, {"samples": samples, "k_list": list(k_list)}, summary=c.to_dict(k_list), verdicts=verdicts)


# --------------------------------------------------------------------------
# duality identities


def duality_check(body: ConvexBody, samples: int = 200, seed: int = 0, radii=(2.0, 100.0)) -> ExperimentReport:
    """Duality and symmetrization identities on sampled points, each against an independent oracle."""
    H = hamiltonian(body)
    symm = H.symm
    vs = sphere_sample(body.dim, samples, seed)
    sym_err = 0.0
    reeb_err = 0.0
    for v in vs:
        oracle = numeric_support_point(symm.h, v)
        sym_err = max(sym_err, float(np.linalg.norm(oracle - (body.grad_h(v) - body.grad_h(-v)))))
        q = body.grad_h(v)
        reeb_err = max(reeb_err, abs(omega(q, reeb(body, q)) - 1.0))

    inv = check_involution(body, samples, seed)

    rng = np.random.default_rng(seed + 11)
    r_lo = max(radii[0], 1.05 * symm.circumradius())
    xs = sphere_sample(body.dim, samples, seed + 12) * rng.uniform(r_lo, max(radii[1], r_lo), size=samples)[:, None]
    anti_err = 0.0
    diff_err = 0.0
    prop_err = 0.0
    proportional = True
    conservation = 0.0
    for x in xs:
        w = apply_J(x) / np.linalg.norm(x)
        nbar_plus = numeric_support_point(symm.h, -w)
        nbar_minus = numeric_support_point(symm.h, w)
        anti_err = max(anti_err, float(np.linalg.norm(nbar_plus + nbar_minus)))
        diff = n_plus(body, x) - n_minus(body, x)
        diff_err = max(diff_err, float(np.linalg.norm(nbar_plus - diff)))
        proportional &= is_positively_proportional(reeb_at_normal(symm, -w), x)
        V = 2.0 * diff
        XH = numeric_hamiltonian_field(H, x)
        prop_err = max(prop_err, float(np.linalg.norm(V + 2 * XH) / np.linalg.norm(V)))
        gH = numeric_gradient(H, x)
        conservation = max(conservation, abs(float(np.dot(gH, H.field(x)))) / (np.linalg.norm(gH) * np.linalg.norm(H.field(x))))

    verdicts = [
        Verdict("symmetrization_identity", sym_err < 1e-10, sym_err, 1e-10),
        Verdict("reeb_normalization", reeb_err < 1e-10, reeb_err, 1e-10),
        Verdict("involution_tangent", inv.max_tangent_violation < 1e-6, inv.max_tangent_violation, 1e-6),
        Verdict("involution_normalization", inv.max_normalization_violation < 1e-10, inv.max_normalization_violation, 1e-10),
        Verdict("nbar_antisymmetry", anti_err < 1e-10, anti_err, 1e-10),
        Verdict("nbar_difference_identity", diff_err < 1e-10, diff_err, 1e-10),
        Verdict("nbar_reeb_proportional", proportional, float(proportional), "a ~ x"),
        Verdict("V_two_routes", prop_err < 1e-8, prop_err, 1e-8),
        Verdict("H_conserved_by_field", conservation < 1e-6, conservation, 1e-6),
    ]
    return ExperimentReport("duality-check", _body_echo(body), seed, {"samples": samples, "radii": list(radii)}, verdicts=verdicts)


def symplecticity_check(body: ConvexBody, points: int = 50, seed: int = 0, r_range=(1.5, 6.0), settings=DEFAULT_SETTINGS) -> float:
    """Worst ``|D^T J D - J|`` over seeded points at ``r_range`` times the circumradius."""
    R0 = body.circumradius()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for w in sphere_sample(body.dim, points, seed):
        x = R0 * rng.uniform(*r_range) * w
        if not body.is_outside(x, 0.01):
            continue
        worst = max(worst, symplecticity_defect(body, x, settings))
    return worst


# --------------------------------------------------------------------------
# decay experiments


def _ratio_band(radii, values, slack=1.5):
    """Per consecutive pair: observed ratio and the 1/r-consistent band."""
    out = []
    for i in range(len(radii) - 1):
        expected = radii[i] / radii[i + 1]
        ratio = values[i + 1] / values[i] if values[i] > 0 else math.inf
        out.append((ratio, expected / slack, expected * slack))
    return out


def _halving_verdict(name, radii, values, slack=1.5):
    """Each doubling-step ratio must sit within ``slack`` of the 1/r prediction."""
    band = _ratio_band(radii, values, slack)
    worst = max(abs(math.log(q / (r1 / r2))) if q > 0 else math.inf for (q, _, _), r1, r2 in zip(band, radii, radii[1:]))
    return Verdict(name, all(lo <= q <= hi for q, lo, hi in band), worst, math.log(slack), "max |log(ratio / expected)|; ratios " + str([round(float(q), 4) for q, _, _ in band]))


def _check_min_radius(radii, constants):
    if min(radii) <= constants.Delta_inv:
        raise DomainError(f"radii must exceed the estimated 1/Delta = {constants.Delta_inv!r}")


def shadow_experiment(body: ConvexBody, radii=(10, 20, 40, 80, 160), samples_per_radius: int = 64, seed: int = 0, constants: ConstantsReport | None = None, settings: SolverSettings = DEFAULT_SETTINGS) -> ExperimentReport:
    """``E(r) = max |T^2(x) - phi_1(x)|`` over sampled directions at ``|x| = r``."""
    radii = [float(r) for r in radii]
    if constants is None:
        constants = constants_estimate(body, seed=seed, settings=settings)
    _check_min_radius(radii, constants)
    H = hamiltonian(body)
    dirs = sphere_sample(body.dim, samples_per_radius, seed)
    rows, E = [], []
    bound_ok = True
    for r in radii:
        worst = 0.0
        for i, w in enumerate(dirs):
            x = r * w
            err = float(np.linalg.norm(T2(body, x, settings) - integrate_flow(H, x, 1.0, settings.flow_tol).x))
            bound_ok &= err <= constants.shadow_bound(r)
            worst = max(worst, err)
        E.append(worst)
        rows.append({"r": r, "E": worst, "rE": r * worst, "bound": constants.shadow_bound(r)})
    rE = [r * e for r, e in zip(radii, E)]
    band = _ratio_band(radii, E)
    spread = max(rE) / min(rE) if min(rE) > 0 else math.inf
    decay_target = E[0] * 2 * radii[0] / radii[-1]
    verdicts = [
        Verdict("rE_bounded_ratio", spread <= 4.0, spread, 4.0, "max/min of r E(r) over the grid"),
        _halving_verdict("E_halves_per_doubling", radii, E),
        Verdict("E_decay_over_range", E[-1] <= decay_target, E[-1], decay_target, "E(r_max) <= E(r_min) * 2 r_min / r_max"),
        Verdict("below_proven_bound", bool(bound_ok), max(e / constants.shadow_bound(r) for r, e in zip(radii, E)), 1.0, "(6C + C_tilde)/r"),
    ]
    return ExperimentReport(
        "shadow",
        _body_echo(body),
        seed,
        {"radii": radii, "samples_per_radius": samples_per_radius},
        tables={"shadow": rows},
        summary={"E": E, "rE": rE, "ratios": [q for q, _, _ in band], "constants": constants.to_dict()},
        verdicts=verdicts,
    )


def tangency_quantities(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS):
    """``|n_-(x) - m_-(x)|``, ``|m_-(y) - n_-(y)|``, ``|n_-(y) - n_+(x)|`` with ``y = T(x)``."""
    a = reflect_minus(body, x, settings)
    y = 2 * a.m - x
    b = reflect_minus(body, y, settings)
    q1 = float(np.linalg.norm(n_minus(body, x) - a.m))
    q2 = float(np.linalg.norm(b.m - n_minus(body, y)))
    q3 = float(np.linalg.norm(n_minus(body, y) - n_plus(body, x)))
    return q1, q2, q3


def eps_decay_experiment(body: ConvexBody, radii=(10, 20, 40, 80, 160), samples: int = 64, seed: int = 0, constants: ConstantsReport | None = None, settings: SolverSettings = DEFAULT_SETTINGS) -> ExperimentReport:
    radii = [float(r) for r in radii]
    if constants is None:
        constants = constants_estimate(body, seed=seed, settings=settings)
    _check_min_radius(radii, constants)
    dirs = sphere_sample(body.dim, samples, seed)
    Q = np.zeros((len(radii), 3))
    q1_bound_ok = True
    worst_q1_ratio = 0.0
    for j, r in enumerate(radii):
        for w in dirs:
            q = tangency_quantities(body, r * w, settings)
            Q[j] = np.maximum(Q[j], q)
            q1_bound_ok &= q[0] <= constants.C / r
            worst_q1_ratio = max(worst_q1_ratio, q[0] * r / constants.C)
    rows = [{"r": r, "q1": float(Q[j, 0]), "q2": float(Q[j, 1]), "q3": float(Q[j, 2])} for j, r in enumerate(radii)]
    verdicts = []
    for i in range(3):
        verdicts.append(_halving_verdict(f"q{i + 1}_halves_per_doubling", radii, Q[:, i]))
        verdicts.append(Verdict(f"q{i + 1}_decreasing", Q[-1, i] <= Q[0, i], float(Q[-1, i]), float(Q[0, i])))
    verdicts.append(Verdict("q1_below_C_over_r", bool(q1_bound_ok), worst_q1_ratio, 1.0, "max q1 r / C"))
    return ExperimentReport(
        "eps-decay",
        _body_echo(body),
        seed,
        {"radii": radii, "samples": samples},
        tables={"eps_decay": rows},
        summary={"C": constants.C, "constants": constants.to_dict()},
        verdicts=verdicts,
    )


# --------------------------------------------------------------------------
# escape


def escape_experiment(body: ConvexBody, x0, k_steps: int, constants: ConstantsReport | None = None, seed: int = 0, settings: SolverSettings = DEFAULT_SETTINGS, record_every: int = 1) -> ExperimentReport:
    """Per-step changes of ``|x|_H^2`` along a ``T^2``-orbit against ``C_bar``."""
    if k_steps < 1:
        raise ValueError("k_steps must be >= 1")
    if constants is None:
        constants = constants_estimate(body, seed=seed, settings=settings)
    H = hamiltonian(body)
    x0 = np.asarray(x0, dtype=float)
    if H(x0) < constants.mu * constants.Delta_inv:
        raise DomainError(f"|x0|_H = {H(x0)!r} is below mu/Delta = {constants.mu * constants.Delta_inv!r}")
    rec = orbit(body, x0, k_steps, settings, H)
    H2 = rec.H_values**2
    inc = np.abs(np.diff(H2))
    ks = np.arange(1, len(H2))
    running = np.abs(H2[1:] - H2[0]) / ks if len(ks) else np.zeros(0)
    norms = np.linalg.norm(rec.points, axis=1)
    growth = (norms[1:] - norms[0]) / np.sqrt(ks) if len(ks) else np.zeros(0)
    c_fit = float(max(0.0, growth.max())) if len(growth) else 0.0
    max_inc = float(inc.max()) if len(inc) else 0.0
    max_run = float(running.max()) if len(running) else 0.0
    verdicts = [
        Verdict("increment_below_C_bar", max_inc <= constants.C_bar, max_inc, constants.C_bar),
        Verdict("running_mean_below_C_bar", max_run <= constants.C_bar, max_run, constants.C_bar),
        Verdict("orbit_complete", rec.complete, rec.n_steps, k_steps),
    ]
    rows = [{"k": int(k), "H2_increment": float(inc[k - 1]), "running": float(running[k - 1]), "eucl_norm": float(norms[k])} for k in range(record_every, len(H2), record_every)]
    return ExperimentReport(
        "escape",
        _body_echo(body),
        seed,
        {"x0": x0.tolist(), "k_steps": k_steps},
        tables={"escape": rows},
        summary={
            "C_bar": constants.C_bar,
            "max_increment": max_inc,
            "max_running": max_run,
            "c_fit_sqrt_k": c_fit,
            "H_rel_variation": float((rec.H_values.max() - rec.H_values.min()) / rec.H_values[0]),
            "residual_max": rec.residual_max,
            "failure": rec.failure,
        },
        verdicts=verdicts,
        truncated=not rec.complete,
        orbit=rec,
    )


# --------------------------------------------------------------------------
# periodic orbits


def periodic_bound_experiment(body: ConvexBody, k: int, starts: int = 200, seed: int = 0, constants: ConstantsReport | None = None, settings: SolverSettings = DEFAULT_SETTINGS) -> ExperimentReport:
    if constants is None:
        constants = constants_estimate(body, seed=seed, settings=settings)
    orbits = periodic_search(body, k, starts, seed, settings)
    rho = constants.rho(k)
    radii = [o.radius for o in orbits]
    verdicts = [Verdict("inside_rho", all(r <= rho for r in radii), max(radii, default=0.0), rho)]
    if k <= 2:
        verdicts.append(Verdict("no_orbits_for_k_le_2", not orbits, len(orbits), 0))
    elif k % 2 == 1:
        verdicts.append(Verdict("odd_k_orbit_found", bool(orbits), len(orbits), ">= 1"))
    rows = [{"index": i, "radius": o.radius, "residual": o.residual, "points": o.points.tolist()} for i, o in enumerate(orbits)]
    return ExperimentReport(
        "periodic",
        _body_echo(body),
        seed,
        {"k": k, "starts": starts},
        tables={"periodic": rows},
        summary={"found": len(orbits), "rho": rho, "constants": constants.to_dict((k,))},
        verdicts=verdicts,
    )


# --------------------------------------------------------------------------
# elementary square bound


@dataclass
class SquareBoundReport:
    checked: int
    skipped: list
    violations: list
    max_excess: float

    @property
    def passed(self) -> bool:
        return not self.violations


def square_bound_check(pairs, C: float, Lambda: float, norm=None) -> SquareBoundReport:
    """``||a|^2 - |b|^2| <= 2C + 3C^2 Lambda^2`` on pairs meeting the hypothesis.

    Hypothesis: ``|b| >= 1/Lambda`` and ``|a - b| <= C/|b|``; other pairs are
    skipped and listed by index.
    """
    if norm is None:
        norm = lambda z: float(np.linalg.norm(z))  # noqa: E731
    rhs = 2 * C + 3 * C**2 * Lambda**2
    skipped, violations = [], []
    checked = 0
    worst = -math.inf
    for i, (a, b) in enumerate(pairs):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        nb = norm(b)
        if nb < 1.0 / Lambda or norm(a - b) > C / nb:
            skipped.append(i)
            continue
        checked += 1
        lhs = abs(norm(a) ** 2 - nb**2)
        worst = max(worst, lhs - rhs)
        if lhs > rhs:
            violations.append(i)
    return SquareBoundReport(checked, skipped, violations, worst if checked else 0.0)


def shadow_pairs(body: ConvexBody, r: float, samples: int, seed: int = 0, settings: SolverSettings = DEFAULT_SETTINGS):
    """Pairs ``(T^2 x, phi_1 x)`` at ``|x| = r``."""
    H = hamiltonian(body)
    out = []
    for w in sphere_sample(body.dim, samples, seed):
        x = r * w
        out.append((T2(body, x, settings), integrate_flow(H, x, 1.0, settings.flow_tol).x))
    return out


# --------------------------------------------------------------------------
# constant-width demo


def angular_increments(points: np.ndarray) -> np.ndarray:
    """Signed angle between consecutive points in the first coordinate plane."""
    th = np.arctan2(points[:, 1], points[:, 0])
    return (np.diff(th) + math.pi) % (2 * math.pi) - math.pi


def demo_constant_width(eps: float = 0.1, radius: float = 100.0, steps: int = 2000, seed: int = 0, settings: SolverSettings = DEFAULT_SETTINGS) -> ExperimentReport:
    """Far orbit about a smooth constant-width curve: ``T^2`` is a uniform rotation."""
    from .bodies import BodySpec

    if abs(eps) >= 0.125:
        raise DomainError("constant_width_2d requires |eps| < 1/8")
    body = BodySpec("constant_width_2d", {"eps": eps}).build()
    rec = orbit(body, [radius, 0.0], steps, settings)
    norms = np.linalg.norm(rec.points, axis=1)
    drift = float((norms.max() - norms.min()) / radius)
    dth = angular_increments(rec.points)
    mean = float(dth.mean()) if len(dth) else 0.0
    spread = float((dth.max() - dth.min()) / abs(mean)) if len(dth) else 0.0
    drift_tol = 1e-8 if eps == 0 else 0.01
    verdicts = [
        Verdict("radius_drift", drift < drift_tol, drift, drift_tol),
        Verdict("uniform_angular_step", spread < 0.02, spread, 0.02),
        Verdict("orbit_complete", rec.complete, rec.n_steps, steps),
    ]
    return ExperimentReport(
        "demo",
        _body_echo(body),
        seed,
        {"eps": eps, "radius": radius, "steps": steps},
        summary={"radius_drift": drift, "mean_angular_step": mean, "expected_angular_step": -4.0 / radius, "angular_spread": spread},
        verdicts=verdicts,
        truncated=not rec.complete,
        orbit=rec,
    )


def tangency_defect(body: ConvexBody, x, m) -> float:
    """``|f(m) - 1| + |<n(m), x - m>| / |x - m|`` from the gauge alone."""
    g = body.gauge_gradient(m)
    d = np.asarray(x) - m
    return abs(body.gauge(m) - 1.0) + abs(float(np.dot(g, d))) / (np.linalg.norm(g) * np.linalg.norm(d))


def orbit_experiment(body: ConvexBody, x0, steps: int, seed: int = 0, settings: SolverSettings = DEFAULT_SETTINGS) -> ExperimentReport:
    rec = orbit(body, x0, steps, settings)
    law = 0.0
    tangency = 0.0
    for k in range(rec.n_steps):
        # x_k, T x_k, x_{k+1}: consecutive midpoints are the tangency points
        y = 2 * rec.tangency[k, 0] - rec.points[k]
        law = max(law, float(np.linalg.norm(0.5 * (y + rec.points[k + 1]) - rec.tangency[k, 1])))
        tangency = max(tangency, tangency_defect(body, rec.points[k], rec.tangency[k, 0]), tangency_defect(body, y, rec.tangency[k, 1]))
    C1 = body.diameter()
    step = float(np.linalg.norm(np.diff(rec.points, axis=0), axis=1).max()) if rec.n_steps else 0.0
    verdicts = [
        Verdict("orbit_complete", rec.complete, rec.n_steps, steps),
        Verdict("reflection_law", law < 1e-9 * max(1.0, float(np.abs(rec.points).max())), law, 1e-9),
        Verdict("tangency", tangency < 1e-8, tangency, 1e-8, "m on M and x - m tangent at m"),
        Verdict("step_below_2_diameter", step <= 2 * C1 * (1 + 1e-9), step, 2 * C1),
    ]
    return ExperimentReport(
        "orbit",
        _body_echo(body),
        seed,
        {"x0": [float(c) for c in x0], "steps": steps},
        summary={"residual_max": rec.residual_max, "H_rel_variation": float((rec.H_values.max() - rec.H_values.min()) / rec.H_values[0]), "failure": rec.failure},
        verdicts=verdicts,
        truncated=not rec.complete,
        orbit=rec,
    )
