import numpy as np
import pytest
from hypothesis import given, strategies as st

from outer_billiards.errors import DimensionError
from outer_billiards.geometry import J_matrix, SymplecticSpace, apply_J, as_point, omega, sphere_sample

finite = st.floats(-1e3, 1e3, allow_nan=False)


def vectors(d):
    return st.lists(finite, min_size=2 * d, max_size=2 * d).map(np.array)


def test_basis_normalization():
    assert omega([1, 0], [0, 1]) == 1.0
    assert omega([0, 1], [1, 0]) == -1.0


def test_J_convention():
    np.testing.assert_array_equal(apply_J([1, 0]), [0, 1])
    np.testing.assert_array_equal(apply_J([0, 1]), [-1, 0])
    np.testing.assert_array_equal(apply_J([1, 2, 3, 4]), [-2, 1, -4, 3])


def test_omega_four_dim_value():
    # J(1,2,3,4) = (-2,1,-4,3); <(-2,1,-4,3),(5,6,7,8)> = -10 + 6 - 28 + 24
    u, v = [1, 2, 3, 4], [5, 6, 7, 8]
    assert omega(u, v) == -8.0
    assert omega(v, u) == 8.0


def test_J_matrix_matches_apply_J():
    rng = np.random.default_rng(1)
    for d in (1, 2, 3):
        u = rng.normal(size=2 * d)
        np.testing.assert_allclose(J_matrix(d) @ u, apply_J(u), atol=0)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_space_properties(d):
    sp = SymplecticSpace(d)
    assert sp.dim == 2 * d
    np.testing.assert_array_equal(sp.J @ sp.J, -np.eye(2 * d))


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(vectors(d), vectors(d))))
def test_omega_antisymmetric(uv):
    u, v = uv
    assert omega(u, v) == pytest.approx(-omega(v, u), abs=1e-9)


@given(st.integers(1, 3).flatmap(vectors))
def test_J_squared_and_compatibility(u):
    np.testing.assert_allclose(apply_J(apply_J(u)), -u, atol=0)
    assert np.linalg.norm(apply_J(u)) == pytest.approx(np.linalg.norm(u))
    assert omega(u, apply_J(u)) == pytest.approx(float(u @ u), rel=1e-12, abs=1e-9)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        omega([1, 0], [1, 0, 0, 0])
    with pytest.raises(DimensionError):
        apply_J([1, 2, 3])
    with pytest.raises(DimensionError):
        as_point([1, 2], 4)


def test_sphere_sample_deterministic_and_unit():
    a = sphere_sample(4, 100, seed=3)
    b = sphere_sample(4, 100, seed=3)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (100, 4)
    assert np.abs(np.linalg.norm(a, axis=1) - 1).max() < 1e-14
    assert not np.array_equal(a, sphere_sample(4, 100, seed=4))
