"""Derivative-free reference computations used to cross-check closed forms.

Everything here uses function *values* only (fourth-order central
differences), so it shares no code path with the analytic gradients.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .bodies import _tangent_basis
from .geometry import apply_J


def richardson_derivative(f: Callable[[float], float], step: float = 1e-3) -> float:
    """``f'(0)`` by the five-point stencil (error ``O(step^4)``)."""
    return (8.0 * (f(step) - f(-step)) - (f(2 * step) - f(-2 * step))) / (12.0 * step)


def numeric_gradient(fun: Callable[[np.ndarray], float], x, step: float | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if step is None:
        step = 1e-3 * max(1.0, float(np.linalg.norm(x)))
    return np.array([richardson_derivative(lambda t: fun(x + t * e), step) for e in np.eye(len(x))])


def numeric_support_point(support: Callable[[np.ndarray], float], v) -> np.ndarray:
    """``p(v) v + grad_S p(v)`` from values of ``p`` on the sphere only."""
    v = np.asarray(v, dtype=float)
    out = support(v) * v
    for e in _tangent_basis(v).T:
        out = out + e * richardson_derivative(lambda t: support(np.cos(t) * v + np.sin(t) * e))
    return out


def numeric_hamiltonian_field(H: Callable[[np.ndarray], float], x) -> np.ndarray:
    """``X_H = J grad H`` with the gradient from values of ``H``."""
    return apply_J(numeric_gradient(H, x))
