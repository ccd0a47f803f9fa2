import numpy as np
import pytest
from hypothesis import given, strategies as st

from outer_billiards.duality import (
    check_involution,
    hamiltonian,
    is_positively_proportional,
    n_minus,
    n_plus,
    norm_equivalence,
    planar_polar_curve,
    reeb,
    shadow_field,
    symplectic_polar_point,
)
from outer_billiards.errors import DomainError
from outer_billiards.geometry import omega, sphere_sample
from outer_billiards.oracles import numeric_hamiltonian_field

from conftest import CATALOG, build

far = st.floats(3.0, 500.0)
angles = st.floats(0, 2 * np.pi, allow_nan=False)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_reeb_normalization(name):
    body = build(name)
    for v in sphere_sample(body.dim, 30, 1):
        q = body.support_point(v)
        R = reeb(body, q)
        assert omega(q, R) == pytest.approx(1.0, abs=1e-10)
        # characteristic: R is tangent to M
        assert abs(np.dot(body.gauge_gradient(q), R)) < 1e-10


def test_reeb_rejects_points_off_surface(ellipse):
    with pytest.raises(DomainError):
        reeb(ellipse, [3.0, 0.0])


@given(angles)
def test_ellipse_polar_curve(t):
    a, b = 1.0, 0.6
    gamma = np.array([a * np.cos(t), b * np.sin(t)])
    dgamma = np.array([-a * np.sin(t), b * np.cos(t)])
    polar = planar_polar_curve(gamma, dgamma)
    np.testing.assert_allclose(polar, [-np.sin(t) / b, np.cos(t) / a], atol=1e-12)
    body = build("ellipse")
    v = np.array([np.cos(t) / a, np.sin(t) / b])
    np.testing.assert_allclose(symplectic_polar_point(body, v / np.linalg.norm(v)), polar, atol=1e-12)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_involution(name):
    rep = check_involution(build(name), samples=50)
    assert rep.max_tangent_violation < 1e-6
    assert rep.max_normalization_violation < 1e-10


def test_positive_proportionality():
    assert is_positively_proportional([1, 2], [2, 4])
    assert not is_positively_proportional([1, 2], [-2, -4])
    assert not is_positively_proportional([1, 2], [2, 4.1])
    assert not is_positively_proportional([0, 0], [1, 0])


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_n_pm_reeb_directions(name):
    body = build(name)
    for x in 5 * sphere_sample(body.dim, 20, 3):
        assert is_positively_proportional(reeb(body, n_minus(body, x)), -x, 1e-9)
        assert is_positively_proportional(reeb(body, n_plus(body, x)), x, 1e-9)


def test_circle_closed_forms(circle):
    H = hamiltonian(circle)
    np.testing.assert_allclose(n_minus(circle, [7.0, 0.0]), [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(n_plus(circle, [7.0, 0.0]), [0.0, -1.0], atol=1e-15)
    for r in (2.0, 10.0, 100.0):
        np.testing.assert_allclose(shadow_field(H, [r, 0.0]), [0.0, -4.0], atol=1e-12)
    for x in 3 * sphere_sample(2, 20, 0):
        assert H(x) == pytest.approx(2 * np.linalg.norm(x), abs=1e-12)
    assert norm_equivalence(H) == pytest.approx(2.0)


def test_constant_width_hamiltonian_is_round(cw):
    H = hamiltonian(cw)
    for x in 4 * sphere_sample(2, 50, 2):
        assert H(x) == pytest.approx(2 * np.linalg.norm(x), rel=1e-13)
        assert np.linalg.norm(H.shadow(x)) == pytest.approx(4.0, rel=1e-12)


def test_pball_hamiltonian_is_three_norm():
    H = hamiltonian(build("pball"))
    for x in 7 * sphere_sample(2, 50, 2):
        assert H(x) == pytest.approx(2 * np.sum(np.abs(x) ** 3) ** (1 / 3), rel=1e-13)


def test_ellipse_hamiltonian_closed_form(ellipse):
    H = hamiltonian(ellipse)
    for x in 4 * sphere_sample(2, 50, 2):
        assert H(x) == pytest.approx(2 * np.hypot(1.0 * x[1], 0.6 * x[0]), rel=1e-13)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_shadow_field_two_routes(name):
    body = build(name)
    H = hamiltonian(body)
    for x in 6 * sphere_sample(body.dim, 20, 4):
        V = shadow_field(H, x)
        np.testing.assert_allclose(V, H.shadow(x), atol=1e-12)
        np.testing.assert_allclose(V, -2 * numeric_hamiltonian_field(H, x), rtol=0, atol=1e-8 * np.linalg.norm(V))


@given(far, angles, st.floats(0.2, 20))
def test_homogeneity(r, t, c):
    H = hamiltonian(build("constant_width"))
    x = r * np.array([np.cos(t), np.sin(t)])
    assert H(c * x) == pytest.approx(c * H(x), rel=1e-12)
    np.testing.assert_allclose(H.shadow(c * x), H.shadow(x), atol=1e-12)


def test_shadow_field_domain(ellipse):
    with pytest.raises(DomainError):
        shadow_field(hamiltonian(ellipse), [0.0, 0.0])
    with pytest.raises(DomainError):
        n_minus(ellipse, [0.2, 0.1])


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_symmetrized_body_is_centrally_symmetric(name):
    symm = hamiltonian(build(name)).symm
    for v in sphere_sample(symm.dim, 20, 9):
        assert symm.h(v) == pytest.approx(symm.h(-v), rel=1e-14)
        np.testing.assert_allclose(symm.grad_h(v), -symm.grad_h(-v), atol=1e-14)
