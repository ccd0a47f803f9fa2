"""Symplectic polar duality, central symmetrization and the Hamiltonian at infinity.

The symplectic polar of ``M`` is ``J`` applied to the Euclidean polar.  Its
gauge is therefore the support function composed with ``-J``, which gives the
closed form used throughout::

    H(x)   = hbar(J x)              (hbar = support of M - M)
    X_H(x) = grad hbar(J x / |x|)   (symmetrized support point)
    V(x)   = 2 (n_+(x) - n_-(x)) = -2 X_H(x)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bodies import ON_SURFACE_TOL, ConvexBody, SymmetrizedBody, _tangent_basis
from .errors import DomainError
from .geometry import apply_J, as_point, omega, sphere_sample


def reeb(body: ConvexBody, q) -> np.ndarray:
    """Reeb vector ``R(q) = J grad f(q)``: characteristic, with ``omega(q, R) = 1``."""
    q = as_point(q, body.dim)
    g = body.gauge(q)
    if abs(g - 1.0) > ON_SURFACE_TOL:
        raise DomainError(f"point is not on M: gauge = {g!r}")
    return apply_J(body.gauge_gradient(q))


def reeb_at_normal(body: ConvexBody, v) -> np.ndarray:
    """Reeb vector at the support point of the unit normal ``v``: ``J v / p(v)``."""
    return apply_J(v) / body.h(v)


def symplectic_polar_point(body: ConvexBody, v) -> np.ndarray:
    """Point of ``M*`` attached to the normal ``v`` (``R`` of its support point)."""
    v = as_point(v, body.dim)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise DomainError("expected a unit vector")
    return reeb_at_normal(body, v)


def planar_polar_curve(gamma, dgamma):
    """Symplectic polar of a star-shaped planar curve: ``gamma' / omega(gamma, gamma')``."""
    return np.asarray(dgamma, dtype=float) / omega(gamma, dgamma)


def is_positively_proportional(a, b, tol: float = 1e-10) -> bool:
    """The relation ``a ~ b``: normalized inner product 1 within ``tol`` and positive factor."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return False
    c = float(np.dot(a, b)) / (na * nb)
    return c > 0 and abs(c - 1.0) <= tol


@dataclass
class InvolutionReport:
    max_tangent_violation: float
    max_normalization_violation: float
    samples: int

    @property
    def max_violation(self) -> float:
        return max(self.max_tangent_violation, self.max_normalization_violation)

    def to_dict(self):
        return {
            "max_tangent_violation": self.max_tangent_violation,
            "max_normalization_violation": self.max_normalization_violation,
            "samples": self.samples,
        }


def check_involution(body: ConvexBody, samples: int = 200, seed: int = 0, fd_step: float = 1e-5) -> InvolutionReport:
    """Check ``R* o R = -id`` on sampled points of ``M``.

    For ``x`` on ``M`` and ``a = R(x)``: ``-x`` must annihilate every tangent of
    ``M*`` at ``a`` under ``omega`` (tangents by central differences of the
    polar parametrization) and ``omega(a, -x) = 1``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tan_viol = 0.0
    norm_viol = 0.0
    for v in sphere_sample(body.dim, samples, seed):
        x = body.grad_h(v)
        a = reeb_at_normal(body, v)
        norm_viol = max(norm_viol, abs(omega(a, -x) - 1.0))
        for e in _tangent_basis(v).T:
            vp = v + fd_step * e
            vm = v - fd_step * e
            vp /= np.linalg.norm(vp)
            vm /= np.linalg.norm(vm)
            u = (reeb_at_normal(body, vp) - reeb_at_normal(body, vm)) / (2 * fd_step)
            tan_viol = max(tan_viol, abs(omega(u, -x)) / (np.linalg.norm(u) * np.linalg.norm(x)))
    return InvolutionReport(tan_viol, norm_viol, samples)


def symmetrize(body: ConvexBody) -> SymmetrizedBody:
    return SymmetrizedBody(body)


def _direction(body: ConvexBody, x) -> np.ndarray:
    x = as_point(x, body.dim)
    if not body.is_outside(x, 1e-12):
        raise DomainError("x must lie strictly outside M")
    return apply_J(x) / np.linalg.norm(x)


def n_plus(body: ConvexBody, x) -> np.ndarray:
    """Point of ``M`` whose Reeb vector is a positive multiple of ``x``."""
    return body.grad_h(-_direction(body, x))


def n_minus(body: ConvexBody, x) -> np.ndarray:
    """Point of ``M`` whose Reeb vector is a positive multiple of ``-x``."""
    return body.grad_h(_direction(body, x))


class HamiltonianAtInfinity:
    """The 1-homogeneous ``H`` whose unit level is the symplectic polar of ``M - M``."""

    def __init__(self, body: ConvexBody):
        self.body = body
        self.symm = symmetrize(body)
        self.dim = body.dim

    def __call__(self, x) -> float:
        return self.symm.h(apply_J(np.asarray(x, dtype=float)))

    def norm(self, x) -> float:
        return self(x)

    def field(self, x) -> np.ndarray:
        """``X_H(x) = J grad H(x)``, evaluated as the symmetrized support point of ``J x``."""
        return self.symm.grad_h(apply_J(np.asarray(x, dtype=float)))

    def grad(self, x) -> np.ndarray:
        return -apply_J(self.field(x))

    def shadow(self, x) -> np.ndarray:
        """``V = -2 X_H`` without domain checks (integrator hot path)."""
        return -2.0 * self.field(x)

    @cached_property
    def mu(self) -> float:
        return norm_equivalence(self)

    def level_point(self, v) -> np.ndarray:
        """Point of ``N = {H = 1}`` attached to the unit normal ``v`` of ``M - M``."""
        return reeb_at_normal(self.symm, v)


def hamiltonian(body: ConvexBody) -> HamiltonianAtInfinity:
    return HamiltonianAtInfinity(body)


def shadow_field(H: HamiltonianAtInfinity, x) -> np.ndarray:
    """``V(x) = 2 (n_+(x) - n_-(x))``; 0-homogeneous, so any ``x != 0`` is accepted."""
    x = as_point(x, H.dim)
    if not np.any(x):
        raise DomainError("V is undefined at the origin")
    w = apply_J(x) / np.linalg.norm(x)
    return 2.0 * (H.body.grad_h(-w) - H.body.grad_h(w))


def norm_equivalence(H: HamiltonianAtInfinity, samples: int = 4000, seed: int = 0) -> float:
    """Sampled ``mu`` with ``|x|/mu <= H(x) <= mu |x|``."""
    vs = np.vstack([np.eye(H.dim), -np.eye(H.dim), sphere_sample(H.dim, samples, seed)])
    vals = np.array([H(v) for v in vs])
    return float(max(vals.max(), (1.0 / vals).max()))
