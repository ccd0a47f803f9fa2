"""Outer symplectic billiards about smooth convex bodies in R^{2d}."""

from .bodies import BodySpec, ConvexBody, Ellipsoid, GaugeBody, HarmonicBody, PBall, SupportBody, constant_width_2d, unit_circle
from .duality import HamiltonianAtInfinity, hamiltonian, n_minus, n_plus, reeb, shadow_field
from .dynamics import SolverSettings, T, T2, T_inv, flow, integrate_flow, iterate, orbit, periodic_search
from .errors import (
    BilliardError,
    ConfigError,
    ConsistencyError,
    DimensionError,
    DomainError,
    EstimationError,
    IntegrationError,
    OrientationError,
    SolverError,
    ValidationError,
)
from .experiments import ConstantsReport, ExperimentReport, constants_estimate
from .geometry import SymplecticSpace, apply_J, omega, sphere_sample

__all__ = [
    "BodySpec",
    "ConvexBody",
    "Ellipsoid",
    "GaugeBody",
    "HarmonicBody",
    "PBall",
    "SupportBody",
    "constant_width_2d",
    "unit_circle",
    "HamiltonianAtInfinity",
    "hamiltonian",
    "n_minus",
    "n_plus",
    "reeb",
    "shadow_field",
    "SolverSettings",
    "T",
    "T2",
    "T_inv",
    "flow",
    "integrate_flow",
    "iterate",
    "orbit",
    "periodic_search",
    "BilliardError",
    "ConfigError",
    "ConsistencyError",
    "DimensionError",
    "DomainError",
    "EstimationError",
    "IntegrationError",
    "OrientationError",
    "SolverError",
    "ValidationError",
    "ConstantsReport",
    "ExperimentReport",
    "constants_estimate",
    "SymplecticSpace",
    "apply_J",
    "omega",
    "sphere_sample",
]
