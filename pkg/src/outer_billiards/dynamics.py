"""The outer symplectic billiard map and the flow that shadows its square.

Reflections are solved in normal coordinates: the tangency point is the
support point ``m = grad h(v)`` of an unknown unit normal ``v`` and the ray
parameter ``s > 0`` satisfies::

    m - x = +s J v / p(v)     (m_-, the map T)
    m - x = -s J v / p(v)     (m_+, the inverse map)

Newton steps act on ``(v, s)`` with the bordered constraint ``<v, dv> = 0`` and
``v`` is renormalized after every update.  The support Hessian may degenerate
(p-balls at axis normals) without making this system singular because the
``s``-term dominates away from ``M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, least_squares

from .bodies import ConvexBody
from .duality import HamiltonianAtInfinity
from .errors import BilliardError, ConsistencyError, DomainError, IntegrationError, OrientationError, SolverError
from .geometry import J_matrix, apply_J, as_point, sphere_sample

MINUS = 1.0
PLUS = -1.0


@dataclass(frozen=True)
class SolverSettings:
    residual_tol: float = 1e-12
    max_iter: int = 50
    warm_start: bool = True
    fallback_grid: int = 720
    outside_margin: float = 1e-6
    flow_tol: float = 1e-10

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.fallback_grid < 8:
            raise ValueError("fallback_grid must be >= 8")

    def to_dict(self) -> dict:
        return {
            "residual_tol": self.residual_tol,
            "max_iter": self.max_iter,
            "warm_start": self.warm_start,
            "fallback_grid": self.fallback_grid,
            "outside_margin": self.outside_margin,
            "flow_tol": self.flow_tol,
        }


DEFAULT_SETTINGS = SolverSettings()


@dataclass
class ReflectionSolution:
    m: np.ndarray
    s: float
    v: np.ndarray
    residual: float
    iterations: int = 0
    used_fallback: bool = False


def _tolerance(settings: SolverSettings, x: np.ndarray) -> float:
    # absolute for O(1) points; grows with |x| because s ~ |x| sets the rounding floor
    return settings.residual_tol * max(1.0, float(np.linalg.norm(x)))


def _newton(body, x, sign, v, s, settings, Jm):
    n = body.dim
    A = np.zeros((n + 1, n + 1))
    rhs = np.zeros(n + 1)
    tol = _tolerance(settings, x)

    def resid(v, s):
        hv = body.h(v)
        g = body.grad_h(v)
        Jv = Jm @ v
        return g - x - sign * s * Jv / hv, hv, g, Jv

    F, hv, g, Jv = resid(v, s)
    res = float(np.linalg.norm(F))
    it = 0
    while it < settings.max_iter:
        if res <= tol:
            return v, s, g, res, it
        it += 1
        A[:n, :n] = body.hess_h(v) - (sign * s / hv) * (Jm - np.outer(Jv, g) / hv)
        A[:n, n] = -sign * Jv / hv
        A[n, :n] = v
        rhs[:n] = -F
        try:
            step = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        while True:
            w = v + lam * step[:n]
            w /= np.linalg.norm(w)
            s_new = s + lam * step[n]
            F_new, hv_new, g_new, Jv_new = resid(w, s_new)
            res_new = float(np.linalg.norm(F_new))
            if res_new < res or lam < 1e-3:
                break
            lam *= 0.5
        v, s, F, hv, g, Jv, res = w, s_new, F_new, hv_new, g_new, Jv_new, res_new
    raise SolverError("reflection Newton did not converge", res, {"x": x.tolist(), "v": v.tolist(), "s": s})


def _initial_s(body, x, sign, v, Jm):
    return sign * body.h(v) * float(np.dot(body.grad_h(v) - x, Jm @ v))


def _near_candidates(body, x, sign):
    """Normals at points of M a little ahead of the radial projection of ``x``.

    Close to M the tangency point sits at distance ~ sqrt(gauge(x) - 1) from
    the projection, along the Reeb direction for ``m_-`` (against it for ``m_+``).
    """
    f = body.gauge(x)
    p = x / f
    R = apply_J(body.gauge_gradient(p))
    R /= np.linalg.norm(R)
    scale = float(np.linalg.norm(x))
    out = []
    for c in (0.5, 1.0, 2.0, 4.0):
        q = p + sign * c * math.sqrt(max(f - 1.0, 1e-16)) * scale * R
        n = body.gauge_gradient(q / body.gauge(q))
        out.append(n / np.linalg.norm(n))
    return out


def _grid_candidates(body, x, sign, settings, Jm):
    """Starting normals from a scan, best first."""
    if body.dim == 2:
        th = np.linspace(0.0, 2 * math.pi, settings.fallback_grid, endpoint=False)

        def g(t):
            v = np.array([math.cos(t), math.sin(t)])
            return body.h(v) - float(np.dot(x, v))

        vals = np.array([g(t) for t in th])
        out = []
        for i in range(len(th)):
            a, b = th[i], th[i] + th[1]
            fa, fb = vals[i], vals[(i + 1) % len(th)]
            if fa == 0.0:
                root = a
            elif fa * fb < 0:
                root = brentq(g, a, b, xtol=1e-15)
            else:
                continue
            v = np.array([math.cos(root), math.sin(root)])
            if _initial_s(body, x, sign, v, Jm) > 0:
                out.insert(0, v)
            else:
                out.append(v)
        return out
    vs = sphere_sample(body.dim, settings.fallback_grid * (body.dim - 1), 2718)
    merit = []
    for v in vs:
        s = _initial_s(body, x, sign, v, Jm)
        if s <= 0:
            continue
        F = body.grad_h(v) - x - sign * s * (Jm @ v) / body.h(v)
        merit.append((float(np.linalg.norm(F)), v))
    merit.sort(key=lambda t: t[0])
    return [v for _, v in merit[:8]]


def _reflect(body, x, sign, settings, hint):
    x = as_point(x, body.dim)
    if not body.is_outside(x, settings.outside_margin):
        raise DomainError(f"x must satisfy gauge(x) >= 1 + {settings.outside_margin}; x = {x.tolist()}")
    Jm = J_matrix(body.d)
    r = float(np.linalg.norm(x))
    if hint is None:
        v0 = sign * (Jm @ x) / r
    else:
        v0 = np.asarray(hint, dtype=float)
        v0 = v0 / np.linalg.norm(v0)
    starts = [v0]
    stages = [lambda: _near_candidates(body, x, sign), lambda: _grid_candidates(body, x, sign, settings, Jm)]
    best_res = math.inf
    fallback = False
    while starts:
        v = starts.pop(0)
        try:
            v, s, m, res, it = _newton(body, x, sign, v, _initial_s(body, x, sign, v, Jm), settings, Jm)
        except SolverError as e:
            best_res = min(best_res, e.residual)
            v, s = None, None
        if v is not None and s > 0:
            return ReflectionSolution(m=m, s=s, v=v, residual=res, iterations=it, used_fallback=fallback)
        if v is not None:
            best_res = min(best_res, res)
        while not starts and stages:
            fallback = True
            starts = stages.pop(0)()
    if v is not None and s is not None and s <= 0:
        raise OrientationError("converged reflection has s <= 0", best_res, {"x": x.tolist(), "s": s})
    raise SolverError("reflection not found after fallback grid", best_res, {"x": x.tolist()})


def reflect_minus(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS, hint=None) -> ReflectionSolution:
    """Tangency point ``m_-(x)`` with ``m - x`` a positive multiple of ``R(m)``."""
    return _reflect(body, x, MINUS, settings, hint)


def reflect_plus(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS, hint=None) -> ReflectionSolution:
    """Tangency point ``m_+(x)`` with ``x - m`` a positive multiple of ``R(m)``."""
    return _reflect(body, x, PLUS, settings, hint)


def _checked_image(body, m, x):
    y = 2.0 * m - x
    if not body.is_outside(y, 0.0):
        raise ConsistencyError(f"iterate landed inside M: {y.tolist()}")
    return y


def T(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS, hint=None) -> np.ndarray:
    x = as_point(x, body.dim)
    return _checked_image(body, reflect_minus(body, x, settings, hint).m, x)


def T_inv(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS, hint=None) -> np.ndarray:
    x = as_point(x, body.dim)
    return _checked_image(body, reflect_plus(body, x, settings, hint).m, x)


def T2(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS) -> np.ndarray:
    x = as_point(x, body.dim)
    first = reflect_minus(body, x, settings)
    y = _checked_image(body, first.m, x)
    second = reflect_minus(body, y, settings)
    return _checked_image(body, second.m, y)


def iterate(body: ConvexBody, x, k: int, settings: SolverSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """``T^k(x)``; negative ``k`` iterates the inverse."""
    x = as_point(x, body.dim)
    step = T if k >= 0 else T_inv
    for _ in range(abs(k)):
        x = step(body, x, settings)
    return x


def reflection_branches(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS, sign: float = MINUS, tol: float = 1e-7):
    """All distinct converged ``(v, s > 0)`` solutions reachable from the fallback grid."""
    x = as_point(x, body.dim)
    Jm = J_matrix(body.d)
    if body.dim == 2:
        starts = _grid_candidates(body, x, sign, settings, Jm)
    else:
        starts = list(sphere_sample(body.dim, settings.fallback_grid, 31))
    found = []
    for v in starts:
        try:
            v, s, m, res, _ = _newton(body, x, sign, v, _initial_s(body, x, sign, v, Jm), settings, Jm)
        except SolverError:
            continue
        if s > 0 and not any(np.linalg.norm(v - w) < tol for w, _ in found):
            found.append((v, s))
    return found


# --------------------------------------------------------------------------
# orbits


@dataclass
class OrbitRecord:
    """T^2-orbit ``x_0, x_1 = T^2 x_0, ...``.

    ``tangency[k]`` holds the two reflection points ``m_-(x_k)`` and
    ``m_-(T x_k)`` used to produce ``x_{k+1}``.
    """

    points: np.ndarray
    tangency: np.ndarray
    H_values: np.ndarray
    residuals: np.ndarray
    failure: dict | None = None
    config: dict = field(default_factory=dict)

    @property
    def n_steps(self) -> int:
        return len(self.points) - 1

    @property
    def residual_max(self) -> float:
        return float(self.residuals.max()) if len(self.residuals) else 0.0

    @property
    def complete(self) -> bool:
        return self.failure is None


def orbit(body: ConvexBody, x0, n_steps: int, settings: SolverSettings = DEFAULT_SETTINGS, H: HamiltonianAtInfinity | None = None) -> OrbitRecord:
    """Iterate ``T^2`` with warm-started reflections; truncate at the first failure."""
    x = as_point(x0, body.dim)
    if H is None:
        H = HamiltonianAtInfinity(body)
    pts = np.empty((n_steps + 1, body.dim))
    tang = np.empty((n_steps, 2, body.dim))
    Hs = np.empty(n_steps + 1)
    res = np.empty(n_steps)
    pts[0] = x
    Hs[0] = H(x)
    hint1 = hint2 = None
    failure = None
    k = 0
    for k in range(n_steps):
        try:
            a = reflect_minus(body, x, settings, hint1)
            y = _checked_image(body, a.m, x)
            b = reflect_minus(body, y, settings, hint2)
            x = _checked_image(body, b.m, y)
        except BilliardError as e:
            failure = {"index": k, "error": type(e).__name__, "message": str(e), "state": pts[k].tolist()}
            break
        if settings.warm_start:
            hint1, hint2 = a.v, b.v
        pts[k + 1] = x
        tang[k, 0] = a.m
        tang[k, 1] = b.m
        Hs[k + 1] = H(x)
        res[k] = max(a.residual, b.residual)
    else:
        k = n_steps
    return OrbitRecord(
        points=pts[: k + 1].copy(),
        tangency=tang[:k].copy(),
        H_values=Hs[: k + 1].copy(),
        residuals=res[:k].copy(),
        failure=failure,
        config={"x0": [float(c) for c in as_point(x0)], "n_steps": n_steps, "solver": settings.to_dict()},
    )


# --------------------------------------------------------------------------
# the shadowing flow


@dataclass
class FlowResult:
    x: np.ndarray
    h_drift: float
    nfev: int


def integrate_flow(H: HamiltonianAtInfinity, x, t: float, tol: float = 1e-10) -> FlowResult:
    """Flow of ``V = -2 X_H`` for time ``t`` by adaptive Dormand-Prince 5(4)."""
    x = as_point(x, H.dim)
    if not H.symm.is_outside(x, 1e-12):
        raise DomainError("flow start must lie outside the symmetrized body")
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    h0 = H(x)
    if t == 0:
        return FlowResult(x.copy(), 0.0, 0)
    scale = float(np.linalg.norm(x))
    sol = solve_ivp(lambda _t, y: H.shadow(y), (0.0, t), x, method="RK45", rtol=tol, atol=tol * scale)
    if not sol.success:
        raise IntegrationError(f"flow integration failed: {sol.message}")
    xt = sol.y[:, -1].copy()
    return FlowResult(xt, abs(H(xt) - h0) / h0, int(sol.nfev))


def flow(H: HamiltonianAtInfinity, x, t: float, tol: float = 1e-10) -> np.ndarray:
    return integrate_flow(H, x, t, tol).x


# --------------------------------------------------------------------------
# diagnostics


def jacobian_fd(fun, x, step: float = 1e-5) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    cols = []
    for e in np.eye(len(x)):
        cols.append((fun(x + step * e) - fun(x - step * e)) / (2 * step))
    return np.column_stack(cols)


def symplecticity_defect(body: ConvexBody, x, settings: SolverSettings = DEFAULT_SETTINGS, step: float = 1e-5) -> float:
    """``max |D^T J D - J|`` for the finite-difference Jacobian ``D`` of ``T`` at ``x``."""
    x = as_point(x, body.dim)
    hint = reflect_minus(body, x, settings).v
    D = jacobian_fd(lambda z: T(body, z, settings, hint), x, step)
    Jm = J_matrix(body.d)
    return float(np.abs(D.T @ Jm @ D - Jm).max())


# --------------------------------------------------------------------------
# periodic orbits


@dataclass
class PeriodicOrbit:
    points: np.ndarray
    residual: float

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.points, axis=1).max())


def _same_cycle(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    k = len(a)
    for shift in range(k):
        if np.abs(a - np.roll(b, shift, axis=0)).max() < tol:
            return True
    return False


SEARCH_MARGIN = 0.01


def periodic_search(body: ConvexBody, k: int, starts: int = 200, seed: int = 0, settings: SolverSettings = DEFAULT_SETTINGS, r_range=(1.05, 3.0), tol: float = 1e-8) -> list[PeriodicOrbit]:
    """Multistart Levenberg-Marquardt on ``|T^k(x) - x|^2``.

    Starting points are seeded, at distances ``r_range`` times the
    circumradius; trial points with gauge below ``1 + SEARCH_MARGIN`` are
    penalized.  Orbits with terminal residual below ``tol`` are kept,
    deduplicated up to cyclic relabeling.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    R0 = body.circumradius()
    rng = np.random.default_rng(seed)
    dirs = sphere_sample(body.dim, starts, seed)
    radii = R0 * rng.uniform(r_range[0], r_range[1], size=starts)
    big = np.full(body.dim, 1e3)

    def residual(z):
        # iterates hugging M are outside the search region and costly to solve; penalize them
        if not body.is_outside(z, SEARCH_MARGIN):
            return big
        try:
            return iterate(body, z, k, settings) - z
        except BilliardError:
            return big

    found: list[PeriodicOrbit] = []
    for d_, r in zip(dirs, radii):
        x0 = r * d_
        if not body.is_outside(x0, 0.05):
            continue
        sol = least_squares(residual, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=40 * (body.dim + 1))
        z = sol.x
        try:
            cyc = [z]
            for _ in range(k - 1):
                cyc.append(T(body, cyc[-1], settings))
            err = float(np.linalg.norm(T(body, cyc[-1], settings) - z))
        except BilliardError:
            continue
        if err >= tol:
            continue
        pts = np.array(cyc)
        if any(_same_cycle(pts, o.points, 1e-6) for o in found):
            continue
        found.append(PeriodicOrbit(pts, err))
    return found
