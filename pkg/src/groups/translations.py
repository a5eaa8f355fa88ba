"""
Translation subgroups, lattice bases and cocompact translation pairs (G, V).
"""

import math
import numpy as np
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from loguru import logger

from src.config.settings import TOL
from src.core.errors import DimensionMismatchError, LatticeError, NotTranslationOnVError
from src.core.isometry import Isometry, apply, is_translation
from src.core.subspace import AffineSubspace
from src.groups.enumeration import GroupBall, GroupSpec, enumerate_ball, translation_spec

# largest denominator accepted when reading coordinates as rationals
MAX_DENOMINATOR = 10_000


@dataclass(frozen=True, eq=False)
class TranslationPair:
    subgroup_generators: tuple
    V: AffineSubspace

    def __post_init__(self):
        gens = tuple(self.subgroup_generators)
        if not gens:
            raise ValueError("A translation pair needs at least one subgroup generator")
        for g in gens:
            if g.n != self.V.n:
                raise DimensionMismatchError(f"Generator acts on R^{g.n}, V lives in R^{self.V.n}")
        object.__setattr__(self, "subgroup_generators", gens)

    def subgroup_spec(self) -> GroupSpec:
        return GroupSpec(self.V.n, self.subgroup_generators)


@dataclass(frozen=True, eq=False)
class LatticeBasis:
    vectors: np.ndarray

    @property
    def rank(self) -> int:
        return self.vectors.shape[0]

    def coordinates(self, v) -> np.ndarray:
        if self.rank == 0:
            return np.zeros(0)
        coeffs, *_ = np.linalg.lstsq(self.vectors.T, np.asarray(v, dtype=float), rcond=None)
        return coeffs

    def contains(self, v, tol: float = TOL) -> bool:
        v = np.asarray(v, dtype=float)
        if self.rank == 0:
            return float(np.linalg.norm(v)) <= tol
        c = np.rint(self.coordinates(v))
        return float(np.linalg.norm(c @ self.vectors - v)) <= tol * max(1.0, float(np.linalg.norm(v)))


@dataclass
class PairReport:
    invariant_translation: bool
    identity_on_direction: bool
    distance_preserving: bool
    cocompact_proxy: bool
    n_elements: int
    lattice_rank: int
    cocompact_is_proxy: bool = True
    failures: List[str] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return (self.invariant_translation and self.identity_on_direction
                and self.distance_preserving and self.cocompact_proxy)

    def to_dict(self) -> dict:
        return {
            "invariant_translation": self.invariant_translation,
            "identity_on_direction": self.identity_on_direction,
            "distance_preserving": self.distance_preserving,
            "cocompact_proxy": self.cocompact_proxy,
            "cocompact_is_proxy": self.cocompact_is_proxy,
            "n_elements": self.n_elements,
            "lattice_rank": self.lattice_rank,
            "failures": self.failures[:20],
        }


def translation_subgroup(ball: GroupBall, tol: float = TOL) -> List[np.ndarray]:
    """Translation vectors of the pure translations in the ball, zero excluded."""
    out = []
    for g in ball.sorted_elements():
        if is_translation(g, tol) and g.translation_norm > tol:
            out.append(np.array(g.tran))
    return out


def _integer_row_basis(rows: List[List[int]], k: int) -> List[List[int]]:
    """Echelon basis of the Z-span of integer rows (exact, by repeated Euclid on columns)."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    for col in range(k):
        while True:
            nz = [r for r in rows if r[col] != 0]
            if len(nz) <= 1:
                break
            pivot = min(nz, key=lambda r: abs(r[col]))
            rest = []
            for r in rows:
                if r is pivot or r[col] == 0:
                    rest.append(r)
                    continue
                q = r[col] // pivot[col]
                reduced = [a - q * b for a, b in zip(r, pivot)]
                if any(reduced):
                    rest.append(reduced)
            rows = rest
        nz = [r for r in rows if r[col] != 0]
        if nz:
            pivot = nz[0]
            basis.append(pivot)
            rows = [r for r in rows if r is not pivot]
    return basis


def _size_reduce(basis: np.ndarray) -> np.ndarray:
    """Greedy pairwise size reduction, iterated to a fixpoint."""
    b = [row.copy() for row in basis]
    changed = True
    while changed:
        changed = False
        for i in range(len(b)):
            for j in range(len(b)):
                if i == j:
                    continue
                mu = round(float(np.dot(b[i], b[j]) / np.dot(b[j], b[j])))
                if mu == 0:
                    continue
                cand = b[i] - mu * b[j]
                if np.dot(cand, cand) < np.dot(b[i], b[i]) - 1e-12:
                    b[i] = cand
                    changed = True
    b.sort(key=lambda v: float(np.dot(v, v)))
    # fix signs: first non-negligible coordinate positive
    for i, v in enumerate(b):
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        if nz.size and v[nz[0]] < 0:
            b[i] = -v
    return np.array(b)


def lattice_basis(translations: Sequence, tol: float = TOL) -> LatticeBasis:
    """
    A size-reduced basis of the discrete additive group generated by the inputs.

    Coordinates against a maximal independent subset are read as rationals with
    bounded denominators; an exact integer echelon form then gives a basis.

    Raises:
        LatticeError: when the inputs do not look like (part of) a discrete subgroup
    """
    vecs = [np.asarray(v, dtype=float).reshape(-1) for v in translations]
    vecs = [v for v in vecs if np.linalg.norm(v) > tol]
    if not vecs:
        return LatticeBasis(np.zeros((0, 0)))
    n = vecs[0].shape[0]
    if any(v.shape[0] != n for v in vecs):
        raise DimensionMismatchError("Translation vectors have different lengths")
    vecs.sort(key=lambda v: float(np.dot(v, v)))

    ref = []
    for v in vecs:
        trial = np.array(ref + [v])
        if np.linalg.matrix_rank(trial, tol=1e-8 * max(1.0, float(np.abs(trial).max()))) > len(ref):
            ref.append(v)
        if len(ref) == n:
            break
    ref = np.array(ref)
    k = ref.shape[0]

    mat = np.array(vecs)
    coords, *_ = np.linalg.lstsq(ref.T, mat.T, rcond=None)
    coords = coords.T
    span_resid = np.linalg.norm(coords @ ref - mat, axis=1)
    if np.any(span_resid > 1e-7 * np.maximum(1.0, np.linalg.norm(mat, axis=1))):
        raise LatticeError("Translation vectors are not spanned by an independent subset")

    fracs = []
    denom = 1
    for row in coords:
        frow = []
        for c in row:
            f = Fraction(float(c)).limit_denominator(MAX_DENOMINATOR)
            if abs(float(f) - c) > 1e-7:
                raise LatticeError(
                    f"Coordinate {c:.12f} is not a small-denominator rational; "
                    "the vectors do not generate a discrete subgroup"
                )
            frow.append(f)
            denom = denom * f.denominator // math.gcd(denom, f.denominator)
        fracs.append(frow)
    int_rows = [[int(f * denom) for f in row] for row in fracs]
    echelon = _integer_row_basis(int_rows, k)
    if len(echelon) != k:
        raise LatticeError(f"Integer echelon form has rank {len(echelon)}, expected {k}")
    basis = (np.array(echelon, dtype=float) / denom) @ ref
    basis = _size_reduce(basis)

    result = LatticeBasis(basis)
    for v in vecs:
        if not result.contains(v, tol):
            raise LatticeError(f"Vector {np.round(v, 9).tolist()} is not an integer combination of the basis")
    logger.debug(f"Lattice basis of rank {k} from {len(vecs)} vectors")
    return result


def tran_V(g: Isometry, V: AffineSubspace, tol: float = TOL) -> np.ndarray:
    """
    Translation vector of g restricted to V.

    Raises:
        NotTranslationOnVError: g does not map V onto itself by a translation
    """
    if g.n != V.n:
        raise DimensionMismatchError(f"Isometry acts on R^{g.n}, V lives in R^{V.n}")
    for b in V.basis:
        drift = float(np.linalg.norm(g.ort @ b - b))
        if drift > tol:
            raise NotTranslationOnVError(f"g moves direction {np.round(b, 6).tolist()} of V by {drift:.3e}")
    disp = apply(g, V.base) - V.base
    if not V.direction_contains(disp, tol):
        raise NotTranslationOnVError("g moves V off itself")
    return disp


def verify_translation_pair(spec: GroupSpec, pair: TranslationPair, r: float,
                            n_probes: int = 32, seed: int = 0, tol: float = TOL) -> PairReport:
    """
    Check the defining properties of a cocompact translation pair on a ball of radius r.
    Cocompactness itself cannot be seen on a finite ball; the report uses
    "lattice rank of tran_V equals dim V" as a labelled proxy.
    """
    if r <= 0:
        raise ValueError("Radius must be positive")
    if spec.dim != pair.V.n:
        raise DimensionMismatchError(f"Group acts on R^{spec.dim}, V lives in R^{pair.V.n}")
    V = pair.V
    ball = enumerate_ball(pair.subgroup_spec(), r, tol=tol)
    rng = np.random.default_rng(seed)
    probes = V.base + 5.0 * rng.standard_normal((n_probes, V.n))
    probe_dist = V.distances(probes)
    probe_norms = np.linalg.norm(probes, axis=1)

    failures = []
    invariant = identity_dir = preserving = True
    tv = []
    for g in ball:
        drift = max((float(np.linalg.norm(g.ort @ b - b)) for b in V.basis), default=0.0)
        if drift > tol:
            identity_dir = False
            failures.append(f"ort not identity on V for {g}")
        try:
            tv.append(tran_V(g, V, tol))
        except NotTranslationOnVError as e:
            invariant = False
            failures.append(str(e))
        moved = np.abs(V.distances(apply(g, probes)) - probe_dist)
        if np.any(moved > 10 * tol * np.maximum(1.0, probe_norms + g.translation_norm)):
            preserving = False
            failures.append(f"d(x, V) changed under {g}")

    rank = 0
    cocompact = False
    if invariant:
        try:
            rank = lattice_basis(tv, tol).rank
            cocompact = rank == V.dim
        except LatticeError as e:
            failures.append(f"tran_V lattice: {e}")
    if failures:
        logger.info(f"Translation pair check found {len(failures)} failures")
    return PairReport(invariant, identity_dir, preserving, cocompact, len(ball), rank, failures=failures)


def translation_subgroup_spec(ball: GroupBall, tol: float = TOL) -> Optional[GroupSpec]:
    """Pure-translation generators for the translation subgroup seen in the ball."""
    vecs = translation_subgroup(ball, tol)
    if not vecs:
        return None
    basis = lattice_basis(vecs, tol)
    return translation_spec(basis.vectors, ball.spec.dim)
