"""Linear symplectic arithmetic on R^{2d}.

Coordinates are ordered in pairs ``(x_1, y_1, ..., x_d, y_d)``.  The complex
rotation acts on each pair as multiplication by ``i``::

    J(x_1, y_1, ..., x_d, y_d) = (-y_1, x_1, ..., -y_d, x_d)

and the symplectic form is ``omega(u, v) = <J u, v>``.  With these choices the
Hamiltonian vector field of ``f`` (defined by ``omega(., X_f) = df``) is
``X_f = J grad f``.  Every other module relies on this single convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a flat float array of even length (and ``dim`` if given)."""
    a = np.asarray(x, dtype=float).reshape(-1)
    if a.size < 2 or a.size % 2:
        raise DimensionError(f"points need an even number >= 2 of coordinates, got {a.size}")
    if dim is not None and a.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {a.size}")
    return a


def apply_J(u) -> np.ndarray:
    """Complex rotation; works on the last axis of an array of points."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] % 2:
        raise DimensionError(f"odd dimension {u.shape[-1]}")
    out = np.empty_like(u)
    out[..., 0::2] = -u[..., 1::2]
    out[..., 1::2] = u[..., 0::2]
    return out


def omega(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch {u.shape} vs {v.shape}")
    return float(np.dot(apply_J(u), v))


def J_matrix(d: int) -> np.ndarray:
    """Matrix of J, so that ``J_matrix(d) @ u == apply_J(u)``."""
    return np.kron(np.eye(d), np.array([[0.0, -1.0], [1.0, 0.0]]))


def sphere_sample(dim: int, n: int, seed: int) -> np.ndarray:
    """``n`` seeded points uniform on the unit sphere of R^dim, shape (n, dim)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, dim))
    norms = np.linalg.norm(g, axis=1)
    # resample the (measure-zero) degenerate draws
    while np.any(norms < 1e-12):
        bad = norms < 1e-12
        g[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


@dataclass(frozen=True)
class SymplecticSpace:
    """The standard symplectic space R^{2d}."""

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("half-dimension d must be positive")

    @property
    def dim(self) -> int:
        return 2 * self.d

    @cached_property
    def J(self) -> np.ndarray:
        return J_matrix(self.d)

    def omega(self, u, v) -> float:
        return omega(as_point(u, self.dim), as_point(v, self.dim))

    def apply_J(self, u) -> np.ndarray:
        return apply_J(as_point(u, self.dim))

    def sphere_sample(self, n: int, seed: int) -> np.ndarray:
        return sphere_sample(self.dim, n, seed)
