"""
Standard discrete groups used by tests, bundled configs and the CLI.

Each builder returns a GroupSpec; the *_axis / *_pair helpers give the natural
affine subspace V on which a subgroup acts by translations.
"""

import numpy as np
from typing import Optional, Sequence

from src.core.isometry import Isometry, plane_rotation, translation
from src.core.subspace import AffineSubspace
from src.groups.enumeration import GroupSpec
from src.groups.translations import TranslationPair


def z_lattice(n: int = 2, rank: Optional[int] = None, scale: float = 1.0) -> GroupSpec:
    """scale * Z^rank spanned by the first rank coordinate vectors of R^n."""
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise ValueError(f"Lattice rank must lie in [1, {n}], got {rank}")
    eye = np.eye(n)
    return GroupSpec(n, tuple(translation(scale * eye[i]) for i in range(rank)))


def lattice_span(n: int, rank: int) -> AffineSubspace:
    return AffineSubspace(np.zeros(n), np.eye(n)[:rank])


def screw_generator(angle: float = 1.0, offset: Optional[Sequence[float]] = None) -> Isometry:
    """Rotation by angle about the vertical line through offset, then one unit up."""
    rot = plane_rotation(3, 0, 1, angle)
    o = np.zeros(3) if offset is None else np.asarray(offset, dtype=float)
    return Isometry(rot, o - rot @ o + np.array([0.0, 0.0, 1.0]))


def screw_group(angle: float = 1.0, offset: Optional[Sequence[float]] = None) -> GroupSpec:
    return GroupSpec(3, (screw_generator(angle, offset),))


def screw_axis(offset: Optional[Sequence[float]] = None) -> AffineSubspace:
    o = np.zeros(3) if offset is None else np.asarray(offset, dtype=float)
    return AffineSubspace(o, [[0.0, 0.0, 1.0]])


def screw_pair(angle: float = 1.0, offset: Optional[Sequence[float]] = None) -> TranslationPair:
    return TranslationPair(screw_group(angle, offset).generators, screw_axis(offset))


def glide_generator(step: float = 1.0) -> Isometry:
    return Isometry(np.diag([1.0, -1.0]), [step, 0.0])


def glide_group(step: float = 1.0) -> GroupSpec:
    """Reflection across the x-axis followed by a shift of step along it."""
    return GroupSpec(2, (glide_generator(step),))


def glide_axis() -> AffineSubspace:
    return AffineSubspace(np.zeros(2), [[1.0, 0.0]])


def glide_pair(step: float = 1.0) -> TranslationPair:
    # the glide itself flips the normal direction, so G is generated by its square
    return TranslationPair((translation([2.0 * step, 0.0]),), glide_axis())


def pg_wallpaper() -> GroupSpec:
    """Wallpaper group pg: a glide by 1/2 along x plus the unit translation along y."""
    return GroupSpec(2, (Isometry(np.diag([1.0, -1.0]), [0.5, 0.0]), translation([0.0, 1.0])))


def pg_pair() -> TranslationPair:
    return TranslationPair((translation([1.0, 0.0]), translation([0.0, 1.0])),
                           AffineSubspace.whole_space(2))


def screw_r4(angle: float = 1.0) -> GroupSpec:
    """Rotation in the e1 e2 plane combined with a unit step along e4."""
    return GroupSpec(4, (Isometry(plane_rotation(4, 0, 1, angle), [0.0, 0.0, 0.0, 1.0]),))


def screw_r4_axis() -> AffineSubspace:
    return AffineSubspace(np.zeros(4), [[0.0, 0.0, 0.0, 1.0]])


def screw_r4_pair(angle: float = 1.0) -> TranslationPair:
    return TranslationPair(screw_r4(angle).generators, screw_r4_axis())


def periodic_line() -> GroupSpec:
    return GroupSpec(3, (translation([0.0, 0.0, 1.0]),))


def periodic_line_pair() -> TranslationPair:
    return TranslationPair(periodic_line().generators, screw_axis())
