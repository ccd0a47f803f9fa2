import json

import numpy as np
import pytest

from outer_billiards.bodies import BodySpec
from outer_billiards.duality import hamiltonian
from outer_billiards.errors import DomainError
from outer_billiards.experiments import (
    c_bar,
    constants_estimate,
    demo_constant_width,
    duality_check,
    eps_decay_experiment,
    escape_experiment,
    orbit_experiment,
    periodic_bound_experiment,
    shadow_experiment,
    shadow_pairs,
    square_bound_check,
)

from conftest import CATALOG, ELLIPSE, build


@pytest.fixture(scope="module")
def circle_constants():
    return constants_estimate(build("circle"))


@pytest.fixture(scope="module")
def cw_constants():
    return constants_estimate(build("constant_width"))


def test_circle_constants(circle_constants):
    c = circle_constants
    assert c.C1 == pytest.approx(2.0, abs=1e-12)
    assert c.m == pytest.approx(4.0, abs=1e-12)
    assert c.mu == pytest.approx(2.0, abs=1e-12)
    # circle curvature is 1, so the normal angle equals the chord-subtending arc
    assert c.ell == pytest.approx(1.0, rel=1e-3)


def test_constant_width_constants(cw_constants):
    assert cw_constants.C1 == pytest.approx(2.0, abs=1e-12)
    assert cw_constants.m == pytest.approx(4.0, abs=1e-12)


def test_constants_identities(cw_constants):
    c = cw_constants
    for value in (c.C1, c.ell, c.C, c.delta_inv, c.C_tilde, c.m, c.eta, c.mu, c.Delta_inv, c.C_bar):
        assert value > 0
    assert c.eta <= 0.5
    assert c.C == 6 * c.C1 / c.ell
    assert c.Delta_inv == max(c.delta_inv, c.delta_tilde_inv)
    assert c.C_bar == c_bar(c.mu, c.C, c.C_tilde, c.Delta_inv)
    a = 6 * c.C + c.C_tilde
    assert c.C_bar == 2 * c.mu**2 * a + 3 * c.mu**2 * a**2 * (1 / c.Delta_inv) ** 2
    for k in range(3, 12):
        assert c.rho(k) == max(c.delta_inv + 2 * (k - 1) * c.C1, 2 * (k - 1) * c.C1 / c.eta, 24 * c.C / c.m)
        assert c.rho(k + 1) >= c.rho(k)


def test_constants_requires_samples():
    with pytest.raises(ValueError):
        constants_estimate(build("circle"), samples=50)


def test_rho_scales_with_body():
    small = constants_estimate(BodySpec.from_dict(ELLIPSE).build())
    big = constants_estimate(BodySpec("ellipsoid", {"semi_axes": [2.0, 1.2]}).build())
    for k in (3, 5, 9):
        assert big.rho(k) / small.rho(k) == pytest.approx(2.0, rel=0.05)


def circle_shadow_error(r):
    # T^2 rotates by 4 arccos(1/r) (ccw), the flow by -4/r; their mismatch is a chord
    gap = 4 * np.arcsin(1 / r) - 4 / r
    return 2 * r * np.sin(gap / 2)


def test_circle_shadow_closed_form(circle_constants):
    rep = shadow_experiment(build("circle"), radii=[10, 20, 40], samples_per_radius=8, constants=circle_constants)
    for r, E in zip([10, 20, 40], rep.summary["E"]):
        assert E == pytest.approx(circle_shadow_error(r), rel=1e-6)
    assert rep.verdict("below_proven_bound").passed


def test_constant_width_shadow_halves(cw_constants):
    rep = shadow_experiment(build("constant_width"), radii=[10, 20, 40, 80], samples_per_radius=16, constants=cw_constants)
    for q in rep.summary["ratios"]:
        assert 1 / 3 <= q <= 2 / 3
    assert rep.passed


def test_shadow_radius_precondition(cw_constants):
    with pytest.raises(DomainError):
        shadow_experiment(build("constant_width"), radii=[1.0, 10.0], constants=cw_constants)


def test_circle_tangency_quantities(circle_constants):
    radii = [10.0, 20.0, 40.0]
    rep = eps_decay_experiment(build("circle"), radii, samples=8, constants=circle_constants)
    for r, row in zip(radii, rep.tables["eps_decay"]):
        q1 = 2 * np.sin(np.arcsin(1 / r) / 2)
        assert row["q1"] == pytest.approx(q1, rel=1e-9)
        assert row["q2"] == pytest.approx(q1, rel=1e-9)
        assert row["q3"] == pytest.approx(2 / r, rel=1e-9)
    assert rep.passed


def test_square_bound_gate():
    rep = square_bound_check([(np.ones(2), np.ones(2))], C=1.0, Lambda=1.0)
    assert rep.checked == 1 and rep.passed
    # |b| below 1/Lambda: skipped and flagged
    rep = square_bound_check([(np.ones(2), 0.1 * np.ones(2))], C=1.0, Lambda=1.0)
    assert rep.checked == 0 and rep.skipped == [0]
    # |a - b| > C/|b|: skipped
    rep = square_bound_check([(np.array([10.0, 0]), np.array([2.0, 0]))], C=1.0, Lambda=1.0)
    assert rep.skipped == [0]


def test_square_bound_on_shadow_pairs(cw_constants):
    c = cw_constants
    H = hamiltonian(build("constant_width"))
    C_sq = c.mu**2 * (6 * c.C + c.C_tilde)
    Lam = 1 / (c.mu * c.Delta_inv)
    rep = square_bound_check(shadow_pairs(build("constant_width"), 20.0, 32), C_sq, Lam, norm=H)
    assert rep.checked == 32 and rep.passed
    # with these choices the right-hand side is exactly C_bar
    assert 2 * C_sq + 3 * C_sq**2 * Lam**2 == pytest.approx(c.C_bar, rel=1e-12)


def test_escape_about_circle(circle_constants):
    rep = escape_experiment(build("circle"), [50.0, 3.0], 200, constants=circle_constants)
    assert rep.summary["max_increment"] < 1e-8
    assert rep.passed


def test_escape_precondition(cw_constants):
    with pytest.raises(DomainError):
        escape_experiment(build("constant_width"), [3.0, 0.0], 10, constants=cw_constants)


def test_escape_constant_width(cw_constants):
    rep = escape_experiment(build("constant_width"), [50.0, 0.0], 500, constants=cw_constants)
    assert rep.passed
    assert rep.summary["c_fit_sqrt_k"] >= 0


def test_demo_constant_width():
    rep = demo_constant_width(0.1, 100.0, 500)
    assert rep.passed
    assert rep.summary["mean_angular_step"] == pytest.approx(-4 / 100, rel=0.02)
    circ = demo_constant_width(0.0, 100.0, 500)
    assert circ.summary["radius_drift"] < 1e-8
    with pytest.raises(DomainError):
        demo_constant_width(0.2)


def test_periodic_bound_small(circle_constants):
    rep = periodic_bound_experiment(build("circle"), 3, starts=10, constants=circle_constants)
    assert rep.passed
    assert rep.summary["found"] >= 1


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_duality_check_passes(name):
    rep = duality_check(build(name), samples=40)
    assert rep.passed, [v for v in rep.verdicts if not v.passed]


def test_orbit_experiment():
    rep = orbit_experiment(build("ellipsoid_4d"), [6.0, 1.0, -2.0, 3.0], 50)
    assert rep.passed


def test_reports_are_deterministic(cw_constants):
    a = shadow_experiment(build("constant_width"), [10, 20], 8, seed=3, constants=cw_constants).to_dict()
    b = shadow_experiment(build("constant_width"), [10, 20], 8, seed=3, constants=cw_constants).to_dict()
    assert json.dumps(a) == json.dumps(b)
