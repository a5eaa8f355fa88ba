import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.stats import special_ortho_group

from conftest import random_isometry
from src.config.settings import COMMUTATOR_DELTA0, COMMUTATOR_TOL, TOL
from src.core.conformal import ConformalMap, conjugate_by_conformal
from src.core.errors import DimensionMismatchError, NotOrthogonalError
from src.core.isometry import (
    Isometry,
    apply,
    commutator,
    commutes,
    compose,
    distance,
    fixed_point_space,
    identity,
    inverse,
    is_identity,
    orthogonal_commutator,
    plane_rotation,
    power,
    power_near_identity,
    rotation_2d,
    translation,
)

R90 = rotation_2d(np.pi / 2)


def test_translations_add():
    g = compose(translation([1.0, 2.0]), translation([3.0, -1.0]))
    assert np.allclose(g.ort, np.eye(2))
    assert np.allclose(g.tran, [4.0, 1.0])


def test_compose_rotation_then_translation():
    g = compose(Isometry(R90, [1.0, 0.0]), translation([0.0, 1.0]))
    assert np.allclose(g.ort, R90)
    assert np.allclose(g.tran, [0.0, 0.0], atol=1e-15)


def test_compose_matches_pointwise_application(rng):
    g, h = random_isometry(rng, 3), random_isometry(rng, 3)
    x = rng.standard_normal((100, 3))
    assert np.allclose(apply(compose(g, h), x), apply(g, apply(h, x)), atol=1e-12)
    assert np.allclose((g @ h)(x), g(h(x)), atol=1e-12)


def test_inverse_examples():
    assert np.allclose(inverse(translation([1.0, -2.0])).tran, [-1.0, 2.0])
    inv = inverse(Isometry(R90, [1.0, 0.0]))
    assert np.allclose(inv.ort, rotation_2d(-np.pi / 2))
    assert np.allclose(inv.tran, [0.0, 1.0])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        compose(identity(2), identity(3))
    with pytest.raises(DimensionMismatchError):
        Isometry(np.eye(2), [0.0, 0.0, 0.0])


def test_rejects_non_orthogonal():
    with pytest.raises(NotOrthogonalError):
        Isometry([[1.0, 0.1], [0.0, 1.0]], [0.0, 0.0])


def test_algebra_suite(rng):
    """Associativity, inverses, ort homomorphism and the conjugation rule on many random pairs."""
    for trial in range(10_000):
        n = 2 + trial % 5
        g, h, k = (random_isometry(rng, n) for _ in range(3))
        assert distance(compose(compose(g, h), k), compose(g, compose(h, k))) < 1e-9
        assert distance(compose(g, inverse(g)), identity(n)) < 1e-9
        assert np.linalg.norm(compose(g, h).ort - g.ort @ h.ort) < 1e-9
        if trial % 10 == 0:
            A = ConformalMap(0.5 + 2 * rng.random(), special_ortho_group.rvs(n, random_state=rng))
            conj = conjugate_by_conformal(A, g)
            assert np.linalg.norm(conj.tran - A.scale * A.rot @ g.tran) < 1e-9
            assert abs(conj.translation_norm - A.scale * g.translation_norm) < 1e-9


def test_conjugate_by_conformal_examples():
    assert np.allclose(conjugate_by_conformal(ConformalMap.scaling(2.0, 2), translation([1.0, 0.0])).tran, [2.0, 0.0])
    rotated = conjugate_by_conformal(ConformalMap(1.0, R90), translation([1.0, 0.0]))
    assert np.allclose(rotated.ort, np.eye(2))
    assert np.allclose(rotated.tran, [0.0, 1.0])


def test_conjugation_is_a_homomorphism(rng):
    for _ in range(50):
        A = ConformalMap(0.5 + 3 * rng.random(), special_ortho_group.rvs(3, random_state=rng))
        g, h = random_isometry(rng, 3), random_isometry(rng, 3)
        lhs = conjugate_by_conformal(A, compose(g, h))
        rhs = compose(conjugate_by_conformal(A, g), conjugate_by_conformal(A, h))
        assert distance(lhs, rhs) < 1e-9


def test_conformal_map_validation():
    with pytest.raises(ValueError):
        ConformalMap(0.0, np.eye(2))
    with pytest.raises(ValueError):
        ConformalMap(1.0, np.diag([1.0, -1.0]))
    A = ConformalMap(2.0, R90)
    assert A.is_expanding
    assert np.allclose(A.power(3).matrix, np.linalg.matrix_power(A.matrix, 3))
    assert np.allclose(A.inverse().matrix @ A.matrix, np.eye(2))


def test_commutator_of_translations_is_identity():
    assert is_identity(commutator(translation([1.0, 2.0]), translation([-3.0, 0.5])))


def test_commutator_rotation_and_translation():
    q = rotation_2d(0.7)
    v = np.array([1.5, -0.25])
    c = commutator(Isometry(q, [0.0, 0.0]), translation(v))
    assert np.allclose(c.ort, np.eye(2))
    assert np.allclose(c.tran, (q - np.eye(2)) @ v)


def test_self_commutator(rng):
    g = random_isometry(rng, 4)
    assert distance(commutator(g, g), identity(4)) < 1e-9


def test_fixed_point_space_examples():
    whole = fixed_point_space(identity(3))
    assert whole.dim == 3
    point = fixed_point_space(Isometry(R90, [0.0, 0.0]))
    assert point.dim == 0
    assert np.allclose(point.base, 0.0)
    assert fixed_point_space(Isometry(np.diag([1.0, -1.0]), [1.0, 0.0])) is None


def test_fixed_point_space_of_rotation_about_offset_axis():
    rot = plane_rotation(3, 0, 1, 1.0)
    o = np.array([1.0, 2.0, 0.0])
    fixed = fixed_point_space(Isometry(rot, o - rot @ o))
    assert fixed.dim == 1
    assert fixed.contains(o + 5 * np.array([0.0, 0.0, 1.0]), 1e-8)


def test_fixed_point_space_never_full_for_non_identity(rng):
    for _ in range(200):
        g = random_isometry(rng, 3)
        fixed = fixed_point_space(g)
        assert fixed is None or fixed.dim < 3


def test_fixed_point_space_agrees_with_identity_tolerance():
    shift = translation([5e-9, 0.0])
    assert not is_identity(shift)
    assert fixed_point_space(shift) is None
    assert fixed_point_space(translation([5e-11, 0.0])).dim == 2
    tiny_turn = Isometry(plane_rotation(3, 0, 1, 5e-9), np.zeros(3))
    assert not is_identity(tiny_turn)
    assert fixed_point_space(tiny_turn).dim == 1


def test_power_near_identity_examples():
    assert power_near_identity(rotation_2d(2 * np.pi / 5), 1e-9, 100) == 5
    assert power_near_identity(np.eye(3), 1e-9, 10) == 1
    with pytest.raises(NotOrthogonalError):
        power_near_identity(np.array([[2.0, 0.0], [0.0, 1.0]]), 0.1, 10)


def test_power_near_identity_matches_scan():
    q = rotation_2d(1.0)
    m = power_near_identity(q, 0.1, 10**6)
    # ||R_t - I|| = 2|sin(t/2)| for a plane rotation
    scan = next(k for k in range(1, 10**6) if 2 * abs(np.sin(k / 2.0)) < 0.1)
    assert m == scan


def test_power_near_identity_not_found():
    assert power_near_identity(rotation_2d(1.0), 1e-12, 5) is None


def test_power_handles_negative_exponents():
    g = Isometry(rotation_2d(0.3), [1.0, 0.0])
    assert distance(compose(power(g, 3), power(g, -3)), identity(2)) < 1e-12


def skew(v):
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def test_near_identity_commutator_property(rng):
    """Rotations close to I that commute with their commutator commute with each other."""
    checked = 0
    for _ in range(3000):
        axis = special_ortho_group.rvs(3, random_state=rng)
        theta = rng.choice([-1.0, 1.0]) * rng.uniform(0.02, 0.05)
        p = axis @ plane_rotation(3, 0, 1, theta) @ axis.T
        if rng.random() < 0.75:
            # same axis, knocked off it by a tiny rotation
            q = axis @ plane_rotation(3, 0, 1, rng.uniform(-0.05, 0.05)) @ axis.T
            v = rng.standard_normal(3)
            q = q @ expm(skew(v / np.linalg.norm(v) * 10 ** rng.uniform(-12.0, -6.5)))
        else:
            other = special_ortho_group.rvs(3, random_state=rng)
            q = other @ plane_rotation(3, 0, 1, rng.uniform(-0.05, 0.05)) @ other.T
        if max(np.linalg.norm(p - np.eye(3), 2), np.linalg.norm(q - np.eye(3), 2)) >= COMMUTATOR_DELTA0:
            continue
        c = orthogonal_commutator(p, q)
        if np.linalg.norm(p @ c - c @ p) < TOL:
            checked += 1
            assert np.linalg.norm(p @ q - q @ p) < COMMUTATOR_TOL
    assert checked > 500


@settings(max_examples=200, deadline=None)
@given(theta=st.floats(-np.pi, np.pi), x=st.floats(-100, 100), y=st.floats(-100, 100))
def test_inverse_undoes_rigid_motion(theta, x, y):
    g = Isometry(rotation_2d(theta), [x, y])
    assert is_identity(compose(inverse(g), g), 1e-9)
    assert commutes(g.ort, inverse(g).ort, 1e-12)


def test_equality_and_hash_use_tolerance():
    g = translation([0.1 + 0.2, 0.0])
    h = translation([0.3, 0.0])
    assert g == h
    assert len({g, h}) == 1
