import numpy as np
import pytest

from src.core.errors import DimensionMismatchError, LatticeError, NotTranslationOnVError
from src.core.isometry import Isometry, plane_rotation, translation
from src.core.subspace import AffineSubspace
from src.groups import fixtures
from src.groups.enumeration import GroupSpec, enumerate_ball
from src.groups.translations import (
    TranslationPair,
    lattice_basis,
    tran_V,
    translation_subgroup,
    translation_subgroup_spec,
    verify_translation_pair,
)


def test_translation_subgroup_of_glide(glide_ball):
    vecs = translation_subgroup(glide_ball.restrict(6))
    assert sorted(v[0] for v in vecs) == [-6, -4, -2, 2, 4, 6]


def test_lattice_basis_of_z2(z2_ball):
    basis = lattice_basis(translation_subgroup(z2_ball.restrict(5)))
    assert basis.rank == 2
    assert np.allclose(np.linalg.norm(basis.vectors, axis=1), 1.0)
    assert abs(abs(np.linalg.det(basis.vectors)) - 1.0) < 1e-9


def test_lattice_basis_finds_gcd():
    basis = lattice_basis([[2.0, 0.0], [3.0, 0.0]])
    assert basis.rank == 1
    assert np.allclose(basis.vectors, [[1.0, 0.0]])


def test_lattice_basis_size_reduces_skewed_generators():
    basis = lattice_basis([[1.0, 0.0], [7.0, 1.0]])
    assert basis.rank == 2
    assert np.allclose(sorted(np.linalg.norm(basis.vectors, axis=1)), [1.0, 1.0])
    assert basis.contains([7.0, 1.0])
    assert not basis.contains([0.5, 0.0])


def test_lattice_basis_hexagonal():
    a = np.array([1.0, 0.0])
    b = np.array([0.5, np.sqrt(3) / 2])
    basis = lattice_basis([a, b, a + b, 2 * a - b, -b])
    assert basis.rank == 2
    assert np.allclose(np.linalg.norm(basis.vectors, axis=1), 1.0)
    for v in (a, b, 3 * a - 5 * b):
        assert basis.contains(v)


def test_lattice_basis_rejects_irrational_ratio():
    with pytest.raises(LatticeError):
        lattice_basis([[1.0], [np.pi]])


def test_lattice_basis_empty():
    assert lattice_basis([]).rank == 0
    assert lattice_basis([[0.0, 0.0]]).rank == 0


def test_lattice_basis_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lattice_basis([[1.0, 0.0], [1.0, 0.0, 0.0]])


def test_tran_V_of_screw():
    g = fixtures.screw_generator(1.0)
    assert np.allclose(tran_V(g, fixtures.screw_axis()), [0.0, 0.0, 1.0])


def test_tran_V_of_offset_screw():
    offset = [1.0, 2.0, 0.0]
    g = fixtures.screw_generator(0.4, offset)
    assert np.allclose(tran_V(g, fixtures.screw_axis(offset)), [0.0, 0.0, 1.0])
    with pytest.raises(NotTranslationOnVError):
        tran_V(g, fixtures.screw_axis())


def test_tran_V_rejects_rotated_direction():
    g = Isometry(plane_rotation(3, 0, 2, 0.3), [0.0, 0.0, 0.0])
    with pytest.raises(NotTranslationOnVError):
        tran_V(g, fixtures.screw_axis())


def test_tran_V_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        tran_V(translation([1.0, 0.0]), fixtures.screw_axis())


@pytest.mark.parametrize("spec, pair, rank", [
    (fixtures.screw_group(1.0), fixtures.screw_pair(1.0), 1),
    (fixtures.screw_group(0.4, [1.0, 2.0, 0.0]), fixtures.screw_pair(0.4, [1.0, 2.0, 0.0]), 1),
    (fixtures.glide_group(), fixtures.glide_pair(), 1),
    (fixtures.pg_wallpaper(), fixtures.pg_pair(), 2),
    (fixtures.screw_r4(1.0), fixtures.screw_r4_pair(1.0), 1),
    (fixtures.periodic_line(), fixtures.periodic_line_pair(), 1),
])
def test_standard_pairs_pass(spec, pair, rank):
    report = verify_translation_pair(spec, pair, 10)
    assert report.all_pass, report.failures
    assert report.lattice_rank == rank
    assert report.cocompact_is_proxy
    assert report.to_dict()["failures"] == []


def test_pair_with_wrong_subspace_fails():
    pair = TranslationPair(fixtures.screw_group(1.0).generators,
                           AffineSubspace(np.zeros(3), [[1.0, 0.0, 0.0]]))
    report = verify_translation_pair(fixtures.screw_group(1.0), pair, 10)
    assert not report.all_pass
    assert not report.identity_on_direction
    assert not report.invariant_translation
    assert report.failures


def test_pair_with_too_small_lattice_is_not_cocompact():
    pair = TranslationPair(fixtures.z_lattice(3, rank=1).generators, fixtures.lattice_span(3, 2))
    report = verify_translation_pair(fixtures.z_lattice(3, rank=1), pair, 10)
    assert report.invariant_translation
    assert report.lattice_rank == 1
    assert not report.cocompact_proxy


def test_pair_validation():
    with pytest.raises(ValueError):
        TranslationPair((), fixtures.screw_axis())
    with pytest.raises(DimensionMismatchError):
        TranslationPair((translation([1.0, 0.0]),), fixtures.screw_axis())
    with pytest.raises(ValueError):
        verify_translation_pair(fixtures.screw_group(), fixtures.screw_pair(), 0)


def test_translation_subgroup_spec_of_glide(glide_ball):
    spec = translation_subgroup_spec(glide_ball.restrict(10))
    assert len(spec.generators) == 1
    assert np.allclose(spec.generators[0].tran, [2.0, 0.0])


def test_translation_subgroup_spec_of_finite_group():
    rot = enumerate_ball(GroupSpec(2, (Isometry(plane_rotation(2, 0, 1, np.pi / 2), [0.0, 0.0]),)), 1)
    assert translation_subgroup_spec(rot) is None


def test_tran_V_rejects_rotation_within_V():
    V = AffineSubspace(np.zeros(3), [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    g = Isometry(plane_rotation(3, 0, 1, np.pi / 2), [0.0, 0.0, 0.0])
    # g maps the xy-plane onto itself but turns it
    for b in V.basis:
        assert V.contains(g(b))
    with pytest.raises(NotTranslationOnVError):
        tran_V(g, V)


@pytest.mark.parametrize("pair", [
    fixtures.screw_pair(0.4, [3.0, 4.0, 0.0]),
    fixtures.screw_pair(1.0),
    fixtures.glide_pair(),
    fixtures.pg_pair(),
    fixtures.screw_r4_pair(1.0),
])
def test_tran_V_is_sandwiched_by_tran(pair):
    V = pair.V
    d0 = float(np.linalg.norm(V.closest_to_origin()))
    tol = 1e-9
    ball = enumerate_ball(pair.subgroup_spec(), 20)
    for g in ball:
        along = float(np.linalg.norm(tran_V(g, V)))
        assert along <= g.translation_norm + tol
        assert g.translation_norm <= along + 2.0 * d0 + tol
