"""
Half-line selection in the orthogonal complement of a translation subspace V.

The orthogonal parts of a group acting on V by translations restrict to V^perp;
when those restrictions commute they split V^perp into invariant lines and planes,
and half-lines taken from two different blocks stay orthogonal under the group.
"""

import numpy as np
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from src.config.settings import THETA_TOL, TOL
from src.core.errors import (
    NonCommutingError,
    NotOrthogonalError,
    NotTranslationOnVError,
    PreconditionError,
    SingleBlockError,
)
from src.core.hash_utils import make_matrix_key
from src.core.isometry import check_orthogonal, commutes
from src.core.subspace import AffineSubspace
from src.geometry.sphere import AvoidancePoint, sphere_avoidance_point
from src.groups.enumeration import GroupBall
from src.groups.translations import tran_V

# eigenvalue gaps below this are treated as one cluster
CLUSTER_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class HalfLine:
    direction: np.ndarray

    def __post_init__(self):
        d = np.array(self.direction, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(d))
        if abs(norm - 1.0) > 1e3 * TOL:
            raise ValueError(f"Half-line direction must be a unit vector, got norm {norm:.6f}")
        d.setflags(write=False)
        object.__setattr__(self, "direction", d)

    def point(self, t: float) -> np.ndarray:
        return t * self.direction

    def lift(self, frame: np.ndarray) -> "HalfLine":
        """Map a direction written in frame coordinates (columns of frame) back to R^n."""
        return HalfLine(np.asarray(frame) @ self.direction)


@dataclass
class BlockDecomposition:
    blocks: List[AffineSubspace]

    @property
    def dims(self) -> List[int]:
        return [b.dim for b in self.blocks]

    def __len__(self):
        return len(self.blocks)


def restrict_orthogonal(ball: GroupBall, V: AffineSubspace, tol: float = TOL) -> List[np.ndarray]:
    """
    ort(g) on V^perp, in the basis V.complement_basis(), for the elements of the ball
    acting on V by translations; duplicates removed.
    """
    if not V.is_linear(tol):
        raise PreconditionError("Restriction to V^perp needs a linear V (base point 0)")
    frame = V.complement_basis()
    out = {}
    for g in ball.sorted_elements():
        try:
            tran_V(g, V, tol)
        except NotTranslationOnVError:
            continue
        mat = frame.T @ g.ort @ frame
        try:
            check_orthogonal(mat, tol, name="restricted ort")
        except NotOrthogonalError as e:
            raise PreconditionError(f"ort(g) does not preserve V^perp for {g}") from e
        out.setdefault(make_matrix_key(mat), mat)
    return list(out.values())


def _split_by_eigh(basis: np.ndarray, sym: np.ndarray) -> List[np.ndarray]:
    """Split span(basis columns) into eigenspaces of the symmetric matrix restricted to it."""
    vals, vecs = np.linalg.eigh(basis.T @ sym @ basis)
    cols = basis @ vecs
    groups, start = [], 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > CLUSTER_TOL:
            groups.append(cols[:, start:i])
            start = i
    return groups


def _canonical_basis(block: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(block) built from projected standard vectors."""
    proj = block @ block.T
    n = block.shape[0]
    chosen = []
    for i in range(n):
        v = proj[:, i].copy()
        for q in chosen:
            v -= np.dot(q, v) * q
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            chosen.append(v / norm)
        if len(chosen) == block.shape[1]:
            break
    return np.array(chosen)


def _planes(basis: np.ndarray, skews: Sequence[np.ndarray], rng: np.random.Generator) -> List[np.ndarray]:
    """Split a joint eigenspace of the symmetric parts into planes invariant under every skew part."""
    coeffs = rng.standard_normal(len(skews))
    k = sum(c * (basis.T @ s @ basis) for c, s in zip(coeffs, skews))
    planes = []
    for cluster in _split_by_eigh(np.eye(basis.shape[1]), -k @ k):
        remaining = cluster
        while remaining.shape[1] >= 2:
            u = remaining[:, 0]
            ku = k @ u
            ku = ku - np.dot(ku, u) * u
            plane = np.column_stack([u, ku / np.linalg.norm(ku)])
            planes.append(basis @ plane)
            rest = remaining - plane @ (plane.T @ remaining)
            q, s, _ = np.linalg.svd(rest, full_matrices=False)
            remaining = q[:, s > 1e-6]
        if remaining.shape[1]:
            raise ValueError("Odd-dimensional rotation cluster; inputs are not commuting orthogonal maps")
    return planes


def simultaneous_block_diagonalize(mats: Sequence[np.ndarray], tol: float = TOL,
                                   theta_tol: float = THETA_TOL, seed: int = 0) -> BlockDecomposition:
    """
    Split R^d into pairwise orthogonal lines and planes invariant under every matrix.

    The symmetric parts (M + M^T)/2 commute, so their joint eigenspaces are found by
    successive refinement; on each joint eigenspace the matrices either act as +-1
    (split into lines) or as rotations sharing invariant planes.

    Raises:
        NonCommutingError: two inputs do not commute
    """
    mats = [check_orthogonal(m, tol, name="input") for m in mats]
    if not mats:
        raise ValueError("Need at least one matrix")
    d = mats[0].shape[0]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not commutes(mats[i], mats[j], 1e3 * tol):
                raise NonCommutingError(f"Inputs {i} and {j} do not commute", pair=(i, j))

    syms = [(m + m.T) / 2 for m in mats]
    skews = [(m - m.T) / 2 for m in mats]
    spaces = [np.eye(d)]
    for sym in syms:
        spaces = [part for space in spaces for part in _split_by_eigh(space, sym)]

    rng = np.random.default_rng(seed)
    lines, planes = [], []
    for space in spaces:
        rotating = [s for s in skews if np.linalg.norm(space.T @ s @ space, ord=2) > theta_tol]
        if not rotating:
            lines.extend(space[:, i:i + 1] for i in range(space.shape[1]))
        else:
            planes.extend(_planes(space, rotating, rng))

    blocks = []
    for b in lines + planes:
        basis = _canonical_basis(b)
        if basis.shape[0] == 1:
            nz = np.flatnonzero(np.abs(basis[0]) > 1e-12)
            if basis[0, nz[0]] < 0:
                basis = -basis
        blocks.append(AffineSubspace(np.zeros(d), basis))

    for blk in blocks:
        for m in mats:
            moved = blk.basis @ m.T
            resid = float(np.max(np.linalg.norm(moved - moved @ blk.direction_projector(), axis=1)))
            if resid > 1e3 * tol:
                logger.warning(f"Block of dimension {blk.dim} is only invariant up to {resid:.2e}")
    return BlockDecomposition(blocks)


def select_orthogonal_halflines(decomp: BlockDecomposition) -> Tuple[HalfLine, HalfLine]:
    """First direction of block 1 and of block 2; orthogonal under every input matrix."""
    if len(decomp) < 2:
        raise SingleBlockError("Only one invariant block; orthogonal half-lines need two")
    return HalfLine(decomp.blocks[0].basis[0]), HalfLine(decomp.blocks[1].basis[0])


def orbit_direction_sequence(ball: GroupBall, V: AffineSubspace, L2: HalfLine,
                             tol: float = TOL) -> np.ndarray:
    """
    Directions of gamma L2 in V^perp coordinates, ordered by |tran_V(gamma)|, repeats skipped.
    L2 is given in V^perp coordinates.
    """
    if not V.is_linear(tol):
        raise PreconditionError("Orbit directions need a linear V")
    frame = V.complement_basis()
    if L2.direction.shape[0] != frame.shape[1]:
        raise ValueError(f"L2 must live in V^perp (dimension {frame.shape[1]})")
    rows = []
    for g in ball:
        try:
            t = tran_V(g, V, tol)
        except NotTranslationOnVError:
            continue
        rows.append((float(np.linalg.norm(t)), g.key, frame.T @ g.ort @ frame @ L2.direction))
    rows.sort(key=lambda row: (round(row[0], 9), row[1]))
    seen, seq = set(), []
    for _, _, direction in rows:
        key = make_matrix_key(direction)
        if key not in seen:
            seen.add(key)
            seq.append(direction / np.linalg.norm(direction))
    return np.array(seq)


def select_avoiding_halflines(ball: GroupBall, V: AffineSubspace, L2: Optional[HalfLine] = None,
                              eps: float = 0.1, grid_res: int = 2000,
                              tol: float = TOL) -> Tuple[HalfLine, HalfLine, AvoidancePoint]:
    """
    Half-lines for the case without two orthogonal blocks: L1 points at a direction of
    V^perp that keeps the weighted distance to every gamma L2 bounded below.
    Both half-lines are returned in V^perp coordinates.
    """
    frame = V.complement_basis()
    if frame.shape[1] < 2:
        raise PreconditionError("V^perp must have dimension at least 2")
    if L2 is None:
        L2 = HalfLine(np.eye(frame.shape[1])[0])
    seq = orbit_direction_sequence(ball, V, L2, tol)
    point = sphere_avoidance_point(seq, eps, grid_res)
    return HalfLine(point.y), L2, point
