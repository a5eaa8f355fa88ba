"""
Conjugation of a discrete group by a linear conformal map A = scale * rot.

theta_A(g) = A g A^-1 is a homomorphism, so invariance A Gamma A^-1 <= Gamma only
needs checking on generators.
"""

import numpy as np
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

from loguru import logger

from src.config.settings import AFFINE_RESIDUAL, COMMUTATOR_DELTA0, DEFAULT_RADII, TOL
from src.core.conformal import ConformalMap, conjugate_by_conformal
from src.core.errors import (
    DimensionMismatchError,
    LatticeError,
    NotTranslationOnVError,
    PreconditionError,
)
from src.core.isometry import Isometry, inverse, is_identity, power_near_identity
from src.groups.enumeration import CosetIndex, GroupBall, GroupSpec, coset_index, enumerate_ball
from src.groups.translations import TranslationPair, lattice_basis, tran_V, translation_subgroup
from src.growth.profile import DimensionEstimate, estimate_dimension, growth_profile


class ConjugationStatus(str, Enum):
    SUBSET = "Subset"
    EQUAL = "Equal"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


class TheoremStatus(str, Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    NOT_APPLICABLE = "NotApplicable"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class ConjugationVerdict:
    status: ConjugationStatus
    witness: Optional[Isometry] = None
    checked_radius: float = 0.0
    certified: bool = True

    @property
    def holds(self) -> bool:
        return self.status in (ConjugationStatus.SUBSET, ConjugationStatus.EQUAL)

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "checked_radius": self.checked_radius,
            "certified": self.certified,
        }


@dataclass
class LinearizationResult:
    status: str
    pair: Optional[TranslationPair] = None
    coefficients: Optional[np.ndarray] = None
    m: Optional[int] = None
    heuristic_generators: bool = False
    reason: str = ""

    @property
    def linearized(self) -> bool:
        return self.status == "Linearized"


@dataclass
class TheoremReport:
    status: TheoremStatus
    k_hat: Optional[int] = None
    translation_rank: Optional[int] = None
    verdict: Optional[ConjugationVerdict] = None
    estimate: Optional[DimensionEstimate] = None
    near_identity_power: Optional[int] = None
    power_certified: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "k_hat": self.k_hat,
            "translation_rank": self.translation_rank,
            "verdict": None if self.verdict is None else self.verdict.to_dict(),
            "estimate": None if self.estimate is None else self.estimate.to_dict(),
            "near_identity_power": self.near_identity_power,
            "power_certified": self.power_certified,
            "notes": self.notes,
        }


def _check_dims(A: ConformalMap, spec: GroupSpec):
    if A.n != spec.dim:
        raise DimensionMismatchError(f"Conformal map acts on R^{A.n}, group on R^{spec.dim}")


def conjugate_spec(A: ConformalMap, spec: GroupSpec) -> GroupSpec:
    _check_dims(A, spec)
    return GroupSpec(spec.dim, tuple(conjugate_by_conformal(A, g) for g in spec.generators))


def conjugate_ball(A: ConformalMap, ball: GroupBall) -> GroupBall:
    """theta_A applied elementwise; translation norms and the radius scale by A.scale."""
    _check_dims(A, ball.spec)
    elements, words = {}, {}
    for key, g in ball.elements.items():
        h = conjugate_by_conformal(A, g)
        elements[h.key] = h
        words[h.key] = ball.word_lengths[key]
    return GroupBall(conjugate_spec(A, ball.spec), A.scale * ball.radius, elements, words,
                     ball.max_word_length, ball.complete, A.scale * ball.margin, ball.incomplete_reason)


def check_conjugation_invariance(A: ConformalMap, spec: GroupSpec, r: Optional[float] = None,
                                 tol: float = TOL) -> ConjugationVerdict:
    """
    Decide A Gamma A^-1 <= Gamma (Subset) and A Gamma A^-1 = Gamma (Equal) on a ball.

    An unmatched generator on a complete ball is a Fails witness; on an incomplete
    ball it only gives Inconclusive.
    """
    _check_dims(A, spec)
    needed = max(A.scale, 1.0 / A.scale) * spec.max_generator_norm
    if r is None:
        r = needed
    elif r + tol < A.scale * spec.max_generator_norm:
        raise PreconditionError(
            f"Radius {r} cannot hold the conjugated generators (need {A.scale * spec.max_generator_norm:.3f})"
        )
    ball = enumerate_ball(spec, r, tol=tol)

    for g in spec.generators:
        if not ball.contains(conjugate_by_conformal(A, g), tol):
            if ball.complete:
                logger.info(f"Conjugate of generator {g} is not in the group")
                return ConjugationVerdict(ConjugationStatus.FAILS, g, r)
            return ConjugationVerdict(ConjugationStatus.INCONCLUSIVE, g, r, certified=False)

    a_inv = A.inverse()
    for g in spec.generators:
        h = conjugate_by_conformal(a_inv, g)
        if h.translation_norm > r + tol or not ball.contains(h, tol):
            certified = ball.complete and h.translation_norm <= r + tol
            return ConjugationVerdict(ConjugationStatus.SUBSET, None, r, certified)
    return ConjugationVerdict(ConjugationStatus.EQUAL, None, r, ball.complete)


def conjugation_index(A: ConformalMap, spec: GroupSpec, r: float = 6.0, tol: float = TOL) -> CosetIndex:
    """[Gamma : A Gamma A^-1], by counting cosets on balls of radius r and 2r."""
    verdict = check_conjugation_invariance(A, spec, tol=tol)
    if not verdict.holds:
        raise PreconditionError(f"Index needs A Gamma A^-1 <= Gamma; invariance check says {verdict.status.value}")
    if verdict.status is ConjugationStatus.EQUAL:
        return CosetIndex(1, verdict.certified)
    ambient = enumerate_ball(spec, r, tol=tol)
    sub = enumerate_ball(conjugate_spec(A, spec), 2.0 * r, tol=tol)
    return coset_index(ambient, sub, tol)


def inverse_conjugation_index(A: ConformalMap, spec: GroupSpec, r: float = 6.0, tol: float = TOL) -> CosetIndex:
    """[A^-1 Gamma A : Gamma]; Gamma sits inside A^-1 Gamma A whenever A Gamma A^-1 <= Gamma."""
    verdict = check_conjugation_invariance(A, spec, tol=tol)
    if not verdict.holds:
        raise PreconditionError(f"Index needs A Gamma A^-1 <= Gamma; invariance check says {verdict.status.value}")
    ambient = enumerate_ball(conjugate_spec(A.inverse(), spec), r, tol=tol)
    sub = enumerate_ball(spec, 2.0 * r, tol=tol)
    return coset_index(ambient, sub, tol)


def _affine_combination(points: np.ndarray, residual_tol: float) -> Optional[np.ndarray]:
    """Coefficients a with sum(a) = 1 and sum(a_i p_i) = 0, or None."""
    n_pts = points.shape[0]
    system = np.vstack([points.T, np.ones((1, n_pts))])
    rhs = np.zeros(system.shape[0])
    rhs[-1] = 1.0
    coeffs, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    if float(np.linalg.norm(system @ coeffs - rhs)) < residual_tol:
        return coeffs
    return None


def _intersect_conjugates(A: ConformalMap, sub_ball: GroupBall, m: int, tol: float) -> List[Isometry]:
    """Elements g of the ball with theta_{A^-i}(g) in the ball for i = 1..m."""
    inverses = [A.power(-i) for i in range(1, m + 1)]
    kept = []
    for g in sub_ball.sorted_elements():
        if all(sub_ball.contains(conjugate_by_conformal(a, g), tol) for a in inverses):
            kept.append(g)
    return kept


def linearize_pair(A: ConformalMap, pair: TranslationPair, spec: GroupSpec, m_max: Optional[int] = None,
                   r: Optional[float] = None, tol: float = TOL,
                   residual_tol: float = AFFINE_RESIDUAL) -> LinearizationResult:
    """
    Move a translation pair (G, V) to a linear V' through 0 with A V' = V'.

    Points v_i = A^i v_0 (v_0 the point of V closest to 0) are searched for an affine
    combination equal to 0, trying m = 0, 1, ..., m_max. The subgroup becomes the
    intersection of the A^i G A^-i, i <= m, read off a ball of G.

    Args:
        m_max: largest power tried, default 2n
        r: radius of the G ball used for the intersection
    """
    _check_dims(A, spec)
    if not A.is_expanding:
        raise PreconditionError("Linearization needs an expanding conformal map (scale > 1)")
    if pair.V.n != spec.dim:
        raise DimensionMismatchError(f"V lives in R^{pair.V.n}, group acts on R^{spec.dim}")
    verdict = check_conjugation_invariance(A, spec, tol=tol)
    if not verdict.holds:
        raise PreconditionError(f"Linearization needs A Gamma A^-1 <= Gamma; got {verdict.status.value}")
    m_max = 2 * spec.dim if m_max is None else int(m_max)

    V = pair.V
    V_lin = V.linear_part()
    for b in V_lin.basis:
        if not V_lin.direction_contains(A(b), tol * max(1.0, A.scale)):
            return LinearizationResult("Inconclusive", reason="A does not map the direction space of V to itself")

    v0 = V.closest_to_origin()
    if float(np.linalg.norm(v0)) <= residual_tol:
        return LinearizationResult("Linearized", pair, np.array([1.0]), 0)

    points = [v0]
    coeffs, m = None, None
    for i in range(1, m_max + 1):
        points.append(A(points[-1]))
        coeffs = _affine_combination(np.array(points), residual_tol * max(1.0, float(np.linalg.norm(points[-1]))))
        if coeffs is not None:
            m = i
            break
    if coeffs is None:
        return LinearizationResult("Inconclusive", reason=f"no affine combination found for m <= {m_max}")

    g_spec = pair.subgroup_spec()
    if r is None:
        r = 2.0 * A.scale ** m * g_spec.max_generator_norm
    g_ball = enumerate_ball(g_spec, r, tol=tol)
    if not g_ball.complete:
        return LinearizationResult("Inconclusive", coefficients=coeffs, m=m,
                                   reason="subgroup ball incomplete; intersection not reliable")
    kept = [g for g in _intersect_conjugates(A, g_ball, m, tol) if not is_identity(g, tol)]
    if not kept:
        return LinearizationResult("Inconclusive", coefficients=coeffs, m=m,
                                   reason=f"no non-trivial element of the intersection within radius {r}")

    shortest = min(g_ball.word_lengths[g.key] for g in kept)
    gens = {}
    for g in kept:
        # one of g, g^-1 is enough
        if g_ball.word_lengths[g.key] == shortest and inverse(g).key not in gens:
            gens[g.key] = g
    generators = tuple(gens.values())
    try:
        for g in generators:
            tran_V(g, V_lin, tol)
    except NotTranslationOnVError as e:
        return LinearizationResult("Inconclusive", coefficients=coeffs, m=m,
                                   reason=f"intersection generator fails on the linear space: {e}")
    logger.warning(f"Linearized pair uses {len(generators)} heuristic generators of word length {shortest}")
    return LinearizationResult("Linearized", TranslationPair(generators, V_lin), coeffs, m,
                               heuristic_generators=True)


def verify_translation_dim_theorem(spec: GroupSpec, A: ConformalMap, radii: Optional[Sequence[float]] = None,
                                   tol: float = TOL, delta0: float = COMMUTATOR_DELTA0) -> TheoremReport:
    """
    Compare the rank of the translation subgroup with the growth dimension for a group
    normalized into itself by an expanding conformal map; both must agree.
    """
    _check_dims(A, spec)
    radii = list(DEFAULT_RADII if radii is None else radii)
    power = power_near_identity(A.rot, delta0, 1000, tol)
    notes = []
    if power is not None:
        notes.append(f"rot^{power} lies within {delta0} of the identity (uncertified neighbourhood)")
    if not A.is_expanding:
        return TheoremReport(TheoremStatus.NOT_APPLICABLE, near_identity_power=power,
                             notes=notes + ["A is not expanding"])
    verdict = check_conjugation_invariance(A, spec, tol=tol)
    if verdict.status is ConjugationStatus.FAILS:
        return TheoremReport(TheoremStatus.NOT_APPLICABLE, verdict=verdict, near_identity_power=power,
                             notes=notes + ["A Gamma A^-1 is not contained in Gamma"])
    if verdict.status is ConjugationStatus.INCONCLUSIVE:
        return TheoremReport(TheoremStatus.INCONCLUSIVE, verdict=verdict, near_identity_power=power, notes=notes)

    ball = enumerate_ball(spec, max(radii), tol=tol)
    estimate = estimate_dimension(growth_profile(ball, radii, tol=tol))
    try:
        rank = lattice_basis(translation_subgroup(ball, tol), tol).rank
    except LatticeError as e:
        return TheoremReport(TheoremStatus.INCONCLUSIVE, estimate.k_hat, None, verdict, estimate, power,
                             notes=notes + [f"translation lattice: {e}"])

    if rank == estimate.k_hat:
        status = TheoremStatus.VERIFIED
    elif ball.complete and not estimate.warning:
        status = TheoremStatus.REFUTED
        logger.error(f"dim Gamma_T = {rank} but growth dimension {estimate.k_hat}: this indicates a bug")
    else:
        status = TheoremStatus.INCONCLUSIVE
    return TheoremReport(status, estimate.k_hat, rank, verdict, estimate, power, notes=notes)
