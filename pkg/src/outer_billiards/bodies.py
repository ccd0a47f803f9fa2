"""Smooth convex bodies with the origin inside.

A body is described by the 1-homogeneous extension ``h`` of its support
function to all of R^{2d}: ``h(u) = |u| p(u/|u|)``.  For unit ``v`` the
gradient ``grad h(v)`` is the support point ``p(v) v + grad_S p(v)``, i.e. the
inverse Gauss map, and ``hess h(v)`` restricted to ``v^perp`` equals
``p id + hess_S p`` (the matrix of curvature radii).

Bodies whose support function has no closed form can be given through their
gauge instead (:class:`GaugeBody`); the support data is then obtained by a
bordered Newton solve.  Bodies with a closed-form support function get their
gauge by a radial root-find unless they override it.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import DomainError, SolverError, ValidationError
from .geometry import as_point, sphere_sample

ROOT_TOL = 1e-12
ROOT_MAX_ITER = 50
ON_SURFACE_TOL = 1e-8


def _check_unit(v: np.ndarray) -> None:
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > 1e-9:
        raise DomainError(f"expected a unit vector, got norm {n!r}")


def _axes(dim: int) -> np.ndarray:
    eye = np.eye(dim)
    return np.vstack([eye, -eye])


@dataclass
class ConvexityReport:
    passed: bool
    min_eigenvalue: float
    argmin: list
    samples: int
    min_support: float

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "min_eigenvalue": self.min_eigenvalue,
            "argmin": self.argmin,
            "samples": self.samples,
            "min_support": self.min_support,
        }


class ConvexBody(ABC):
    """Smooth quadratically convex hypersurface ``M`` bounding a body around 0."""

    dim: int
    spec: "BodySpec | None" = None

    # -- support data (1-homogeneous extension) -----------------------------

    @abstractmethod
    def h(self, u: np.ndarray) -> float:
        """Support function extended 1-homogeneously to R^dim."""

    @abstractmethod
    def grad_h(self, u: np.ndarray) -> np.ndarray:
        """Gradient of ``h``; 0-homogeneous, equal to the support point."""

    @abstractmethod
    def hess_h(self, u: np.ndarray) -> np.ndarray:
        """Hessian of ``h``; (-1)-homogeneous with ``u`` in its kernel."""

    # -- gauge data ----------------------------------------------------------

    @abstractmethod
    def gauge(self, x) -> float:
        """Minkowski gauge ``f`` with ``M = {f = 1}``; ``f(0) = 0``."""

    @abstractmethod
    def gauge_gradient(self, x) -> np.ndarray:
        """Gradient of the gauge (0-homogeneous, satisfies Euler's identity)."""

    # -- derived operations --------------------------------------------------

    @property
    def d(self) -> int:
        return self.dim // 2

    def support(self, v) -> float:
        v = as_point(v, self.dim)
        _check_unit(v)
        return self.h(v)

    def support_point(self, v) -> np.ndarray:
        """Inverse Gauss map: the point of ``M`` with outward unit normal ``v``."""
        v = as_point(v, self.dim)
        _check_unit(v)
        return self.grad_h(v)

    def gauss_map(self, q) -> np.ndarray:
        q = as_point(q, self.dim)
        g = self.gauge(q)
        if abs(g - 1.0) > ON_SURFACE_TOL:
            raise DomainError(f"point is not on M: gauge = {g!r}")
        n = self.gauge_gradient(q)
        return n / np.linalg.norm(n)

    def is_outside(self, x, margin: float = 0.0) -> bool:
        """True iff ``gauge(x) > 1 + margin``, avoiding the gauge solve when possible."""
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            return False
        # gauge(x) >= <v, x> / h(v) for every v; v = x/|x| is usually decisive far out
        if r / self.h(x / r) > 1.0 + margin:
            return True
        return self.gauge(x) > 1.0 + margin

    def diameter(self, samples: int = 2000, seed: int = 0) -> float:
        """Sampled maximal width ``max p(v) + p(-v)`` (a lower bound for diam M)."""
        if samples < 2:
            raise ValueError("samples must be >= 2")
        vs = np.vstack([_axes(self.dim), sphere_sample(self.dim, samples, seed)])
        return max(self.h(v) + self.h(-v) for v in vs)

    def circumradius(self, samples: int = 2000, seed: int = 0) -> float:
        vs = np.vstack([_axes(self.dim), sphere_sample(self.dim, samples, seed)])
        return max(self.h(v) for v in vs)

    def validate_convexity(self, samples: int = 500, seed: int = 0, tol: float = 1e-9) -> ConvexityReport:
        """Smallest curvature radius found on sampled normals (axes included)."""
        if samples < 1:
            raise ValueError("samples must be >= 1")
        vs = np.vstack([_axes(self.dim), sphere_sample(self.dim, samples, seed)])
        worst = math.inf
        arg = vs[0]
        min_p = math.inf
        for v in vs:
            min_p = min(min_p, self.h(v))
            lam = self._tangential_min_eig(v)
            if lam < worst:
                worst, arg = lam, v
        return ConvexityReport(
            passed=bool(worst > tol and min_p > 0),
            min_eigenvalue=float(worst),
            argmin=[float(c) for c in arg],
            samples=len(vs),
            min_support=float(min_p),
        )

    def _tangential_min_eig(self, v: np.ndarray) -> float:
        basis = _tangent_basis(v)
        return float(np.linalg.eigvalsh(basis.T @ self.hess_h(v) @ basis).min())

    def scaled(self, c: float) -> "ConvexBody":
        return ScaledBody(self, c)


def _tangent_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``v^perp`` as columns, shape (dim, dim-1)."""
    q, _ = np.linalg.qr(np.column_stack([v, np.eye(len(v))]))
    return q[:, 1:]


class SupportBody(ConvexBody):
    """Body given by its support function; gauge via radial root-finding."""

    def radial_normal(self, x) -> tuple[np.ndarray, float]:
        """Unit normal ``v`` and ``t = |grad h(v)|`` with ``grad h(v) = t x/|x|``.

        Solves ``grad h(v) - t xhat = 0`` for ``(v, t)`` with ``v`` on the sphere
        by Newton steps on the bordered system; the boundary point in direction
        ``x`` is then ``t xhat`` and ``gauge(x) = |x| / t``.
        """
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x)
        xhat = x / r
        best = None
        for v0 in self._radial_starts(xhat):
            try:
                return self._radial_newton(xhat, v0)
            except SolverError as e:
                if best is None or e.residual < best.residual:
                    best = e
        raise best

    def _radial_starts(self, xhat):
        yield xhat
        # maximize <v, xhat>/h(v) on a sample: the maximizer is the radial normal
        vs = sphere_sample(self.dim, 256 * (self.dim - 1), 12345)
        scores = vs @ xhat / np.array([self.h(v) for v in vs])
        for i in np.argsort(-scores)[:3]:
            yield vs[i]

    def _radial_newton(self, xhat, v):
        n = self.dim
        t = float(np.dot(self.grad_h(v), xhat))
        A = np.zeros((n + 1, n + 1))
        rhs = np.zeros(n + 1)
        res = math.inf
        for _ in range(ROOT_MAX_ITER):
            F = self.grad_h(v) - t * xhat
            res = float(np.linalg.norm(F))
            if res <= ROOT_TOL:
                if t <= 0:
                    break
                return v, t
            A[:n, :n] = self.hess_h(v)
            A[:n, n] = -xhat
            A[n, :n] = v
            rhs[:n] = -F
            try:
                step = np.linalg.solve(A, rhs)
            except np.linalg.LinAlgError:
                break
            lam = 1.0
            while lam > 1e-4:
                w = v + lam * step[:n]
                w /= np.linalg.norm(w)
                tt = t + lam * step[n]
                if np.linalg.norm(self.grad_h(w) - tt * xhat) < res or lam <= 1.0 / 64:
                    break
                lam *= 0.5
            v, t = w, tt
        raise SolverError("radial root-find did not converge", res, {"xhat": xhat.tolist()})

    def gauge(self, x) -> float:
        x = as_point(x, self.dim)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            return 0.0
        _, t = self.radial_normal(x)
        return r / t

    def gauge_gradient(self, x) -> np.ndarray:
        x = as_point(x, self.dim)
        if not np.any(x):
            raise DomainError("gauge gradient undefined at the origin")
        v, _ = self.radial_normal(x)
        return v / self.h(v)


class Ellipsoid(SupportBody):
    """``sum x_i^2 / a_i^2 <= 1``; everything in closed form."""

    def __init__(self, semi_axes):
        a = np.asarray(semi_axes, dtype=float).reshape(-1)
        as_point(a)
        if np.any(a <= 0):
            raise ValidationError("semi_axes", "semi-axes must be positive")
        self.semi_axes = a
        self.dim = a.size
        self._a2 = a * a

    def h(self, u):
        return math.sqrt(float(np.dot(self._a2, u * u)))

    def grad_h(self, u):
        return self._a2 * u / self.h(u)

    def hess_h(self, u):
        hu = self.h(u)
        au = self._a2 * u
        return np.diag(self._a2) / hu - np.outer(au, au) / hu**3

    def gauge(self, x):
        x = as_point(x, self.dim)
        return math.sqrt(float(np.dot(x * x, 1.0 / self._a2)))

    def gauge_gradient(self, x):
        x = as_point(x, self.dim)
        f = self.gauge(x)
        if f == 0.0:
            raise DomainError("gauge gradient undefined at the origin")
        return x / self._a2 / f


class PBall(SupportBody):
    """Unit ball of the p-norm, ``1 < p < 2``; support is the dual q-norm.

    Curvature is infinite at the axis points of ``M`` (the support Hessian
    degenerates at axis normals), so quadratic convexity fails exactly there.
    """

    def __init__(self, p: float = 1.5, d: int = 1):
        if not 1.0 < p < 2.0:
            raise ValidationError("p", "exponent must lie in (1, 2)")
        if d < 1:
            raise ValidationError("d", "half-dimension must be positive")
        self.p = float(p)
        self.q = self.p / (self.p - 1.0)
        self.dim = 2 * int(d)

    def h(self, u):
        return float(np.sum(np.abs(u) ** self.q) ** (1.0 / self.q))

    def grad_h(self, u):
        n = self.h(u)
        return np.sign(u) * np.abs(u) ** (self.q - 1) / n ** (self.q - 1)

    def hess_h(self, u):
        q = self.q
        n = self.h(u)
        g = np.sign(u) * np.abs(u) ** (q - 1)
        return (q - 1) * (np.diag(np.abs(u) ** (q - 2)) / n ** (q - 1) - np.outer(g, g) / n ** (2 * q - 1))

    def gauge(self, x):
        x = as_point(x, self.dim)
        return float(np.sum(np.abs(x) ** self.p) ** (1.0 / self.p))

    def gauge_gradient(self, x):
        f = self.gauge(x)
        if f == 0.0:
            raise DomainError("gauge gradient undefined at the origin")
        return np.sign(x) * np.abs(x) ** (self.p - 1) / f ** (self.p - 1)


class HarmonicBody(SupportBody):
    """Support function ``radius + eps * cos(mode * theta)`` in the first coordinate plane.

    Extended to R^{2d} as ``h(u) = radius |u| + eps Re((u_1 + i u_2)^mode) / |u|^(mode-1)``,
    which is smooth away from 0.  In the plane ``p + p'' = radius - eps (mode^2 - 1) cos``
    so convexity needs ``|eps| (mode^2 - 1) < radius``.  ``mode = 3`` gives curves of
    constant width ``2 radius``; ``mode = 1`` is a translated ball.
    """

    def __init__(self, eps: float = 0.1, mode: int = 3, radius: float = 1.0, d: int = 1):
        if mode < 1 or int(mode) != mode:
            raise ValidationError("mode", "mode must be a positive integer")
        if radius <= 0:
            raise ValidationError("radius", "radius must be positive")
        bound = radius / (mode * mode - 1) if mode > 1 else radius
        if abs(eps) >= bound:
            raise ValidationError("eps", f"|eps| must be < {bound!r} for convexity")
        self.eps = float(eps)
        self.mode = int(mode)
        self.radius = float(radius)
        self.dim = 2 * int(d)

    def _parts(self, u):
        m = self.mode
        z = complex(u[0], u[1])
        n = math.sqrt(float(np.dot(u, u)))
        zm1 = z ** (m - 1)
        P = (z * zm1).real
        dP = np.zeros(self.dim)
        dP[0] = (m * zm1).real
        dP[1] = -(m * zm1).imag
        return z, n, P, dP

    def h(self, u):
        _, n, P, _ = self._parts(u)
        return self.radius * n + self.eps * P / n ** (self.mode - 1)

    def grad_h(self, u):
        _, n, P, dP = self._parts(u)
        k = self.mode - 1
        Q = n**-k
        dQ = -k * n ** (-k - 2) * u
        return self.radius * u / n + self.eps * (Q * dP + P * dQ)

    def hess_h(self, u):
        z, n, P, dP = self._parts(u)
        m, k = self.mode, self.mode - 1
        eye = np.eye(self.dim)
        Q = n**-k
        dQ = -k * n ** (-k - 2) * u
        HQ = -k * n ** (-k - 2) * eye + k * (k + 2) * n ** (-k - 4) * np.outer(u, u)
        HP = np.zeros((self.dim, self.dim))
        if m >= 2:
            w = m * (m - 1) * z ** (m - 2)
            HP[0, 0], HP[0, 1] = w.real, -w.imag
            HP[1, 0], HP[1, 1] = -w.imag, -w.real
        Hg = Q * HP + np.outer(dP, dQ) + np.outer(dQ, dP) + P * HQ
        return self.radius * (eye - np.outer(u, u) / n**2) / n + self.eps * Hg


class SymmetrizedBody(SupportBody):
    """``M - M`` (Minkowski sum with the reflected body), support ``p(v) + p(-v)``."""

    def __init__(self, base: ConvexBody):
        self.base = base
        self.dim = base.dim

    def h(self, u):
        return self.base.h(u) + self.base.h(-u)

    def grad_h(self, u):
        return self.base.grad_h(u) - self.base.grad_h(-u)

    def hess_h(self, u):
        return self.base.hess_h(u) + self.base.hess_h(-u)


class ScaledBody(ConvexBody):
    """Homothetic copy ``c M``."""

    def __init__(self, base: ConvexBody, c: float):
        if c <= 0:
            raise ValueError("scale must be positive")
        self.base = base
        self.c = float(c)
        self.dim = base.dim

    def h(self, u):
        return self.c * self.base.h(u)

    def grad_h(self, u):
        return self.c * self.base.grad_h(u)

    def hess_h(self, u):
        return self.c * self.base.hess_h(u)

    def gauge(self, x):
        return self.base.gauge(np.asarray(x, dtype=float) / self.c)

    def gauge_gradient(self, x):
        return self.base.gauge_gradient(x) / self.c


class GaugeBody(ConvexBody):
    """Body given by a 1-homogeneous gauge ``f`` with gradient and Hessian.

    The support point for a direction ``u`` solves the Lagrange system
    ``grad f(x) = lam u, f(x) = 1`` (bordered Newton); its derivative in ``u``
    comes from differentiating the same system implicitly.
    """

    def __init__(self, f: Callable, grad_f: Callable, hess_f: Callable, dim: int):
        self._f, self._grad_f, self._hess_f = f, grad_f, hess_f
        as_point(np.zeros(dim))
        self.dim = dim

    def gauge(self, x):
        x = as_point(x, self.dim)
        return float(self._f(x)) if np.any(x) else 0.0

    def gauge_gradient(self, x):
        x = as_point(x, self.dim)
        if not np.any(x):
            raise DomainError("gauge gradient undefined at the origin")
        return np.asarray(self._grad_f(x), dtype=float)

    def _maximizer(self, u):
        """Return ``(x, lam)`` with ``x`` maximizing ``<u, x>`` over ``f <= 1``."""
        n = self.dim
        x = u / self._f(u)
        lam = 1.0 / float(np.dot(u, x))
        A = np.zeros((n + 1, n + 1))
        F = np.zeros(n + 1)
        res = math.inf
        for _ in range(ROOT_MAX_ITER):
            F[:n] = self._grad_f(x) - lam * u
            F[n] = self._f(x) - 1.0
            res = float(np.linalg.norm(F))
            if res <= ROOT_TOL:
                return x, lam
            A[:n, :n] = self._hess_f(x)
            A[:n, n] = -u
            A[n, :n] = self._grad_f(x)
            step = np.linalg.solve(A, -F)
            x = x + step[:n]
            lam += step[n]
            # stay on the ray-projected surface; keeps the iteration in the cone where f is smooth
            x = x / self._f(x)
        raise SolverError("support maximization did not converge", res, {"u": u.tolist()})

    def h(self, u):
        x, _ = self._maximizer(np.asarray(u, dtype=float))
        return float(np.dot(u, x))

    def grad_h(self, u):
        return self._maximizer(np.asarray(u, dtype=float))[0]

    def hess_h(self, u):
        u = np.asarray(u, dtype=float)
        n = self.dim
        x, lam = self._maximizer(u)
        A = np.zeros((n + 1, n + 1))
        A[:n, :n] = self._hess_f(x)
        A[:n, n] = -u
        A[n, :n] = self._grad_f(x)
        rhs = np.zeros((n + 1, n))
        rhs[:n] = lam * np.eye(n)
        D = np.linalg.solve(A, rhs)[:n]
        return 0.5 * (D + D.T)

    def _tangential_min_eig(self, v):
        q = self.grad_h(v)
        basis = _tangent_basis(v)
        return float(np.linalg.eigvalsh(basis.T @ self._hess_f(q) @ basis).min())


def ellipsoid_gauge_body(semi_axes) -> GaugeBody:
    """The ellipsoid given through its gauge only (exercises the gauge path)."""
    a2 = np.asarray(semi_axes, dtype=float) ** 2

    def f(x):
        return math.sqrt(float(np.dot(x * x, 1.0 / a2)))

    def grad_f(x):
        return x / a2 / f(x)

    def hess_f(x):
        fx = f(x)
        g = x / a2 / fx
        return np.diag(1.0 / a2) / fx - np.outer(g, g) / fx

    return GaugeBody(f, grad_f, hess_f, a2.size)


# --------------------------------------------------------------------------
# catalog


_KIND_KEYS = {
    "ellipsoid": {"semi_axes": None, "representation": "support"},
    "pball": {"p": 1.5, "d": 1},
    "support_harmonic": {"eps": 0.1, "mode": 3, "radius": 1.0, "d": 1},
    "constant_width_2d": {"eps": 0.1},
}


@dataclass(frozen=True)
class BodySpec:
    """Catalog entry: ``kind`` plus its parameters, validated on construction."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KIND_KEYS:
            raise ValidationError("body.kind", f"unknown kind {self.kind!r}; expected one of {sorted(_KIND_KEYS)}")
        allowed = _KIND_KEYS[self.kind]
        for key in self.params:
            if key not in allowed:
                raise ValidationError(f"body.{key}", f"unknown parameter for {self.kind}")
        full = {k: v for k, v in allowed.items()}
        full.update(self.params)
        for k, v in full.items():
            if v is None:
                raise ValidationError(f"body.{k}", "required parameter missing")
        object.__setattr__(self, "params", _normalize(self.kind, full))
        self.build()  # parameter validity

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BodySpec":
        if not isinstance(data, dict):
            raise ValidationError("body", "must be an object")
        if "kind" not in data:
            raise ValidationError("body.kind", "missing")
        params = {k: v for k, v in data.items() if k != "kind"}
        return cls(data["kind"], params)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    def build(self) -> ConvexBody:
        p = self.params
        if self.kind == "ellipsoid":
            if p["representation"] == "gauge":
                body = ellipsoid_gauge_body(p["semi_axes"])
            else:
                body = Ellipsoid(p["semi_axes"])
        elif self.kind == "pball":
            body = PBall(p["p"], p["d"])
        elif self.kind == "support_harmonic":
            body = HarmonicBody(p["eps"], p["mode"], p["radius"], p["d"])
        else:
            if abs(p["eps"]) >= 0.125:
                raise ValidationError("body.eps", "constant_width_2d requires |eps| < 1/8")
            body = HarmonicBody(p["eps"], 3, 1.0, 1)
        body.spec = self
        return body


def _normalize(kind, params):
    out = dict(params)
    try:
        if kind == "ellipsoid":
            axes = [float(a) for a in out["semi_axes"]]
            if len(axes) < 2 or len(axes) % 2:
                raise ValidationError("body.semi_axes", "need an even number >= 2 of semi-axes")
            if min(axes) <= 0:
                raise ValidationError("body.semi_axes", "semi-axes must be positive")
            out["semi_axes"] = axes
            if out["representation"] not in ("support", "gauge"):
                raise ValidationError("body.representation", "must be 'support' or 'gauge'")
        for key in ("p", "eps", "radius"):
            if key in out:
                out[key] = float(out[key])
        for key in ("d", "mode"):
            if key in out:
                if isinstance(out[key], bool) or int(out[key]) != out[key]:
                    raise ValidationError(f"body.{key}", "must be an integer")
                out[key] = int(out[key])
    except (TypeError, ValueError) as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError("body", str(e)) from None
    return out


def constant_width_2d(eps: float = 0.1) -> HarmonicBody:
    return BodySpec("constant_width_2d", {"eps": eps}).build()


def unit_circle() -> Ellipsoid:
    return BodySpec("ellipsoid", {"semi_axes": [1.0, 1.0]}).build()
