"""
Breadth-first enumeration of a finitely generated subgroup of E(n) inside a
translation-norm ball, plus coset counting between two enumerated balls.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional

from loguru import logger
from scipy.spatial import cKDTree
from tqdm import tqdm

from src.config.settings import TOL, MAX_ELEMENTS, MAX_WORDS, NEAR_COLLISION, SHOW_PROGRESS
from src.core.errors import DimensionMismatchError, NonDiscreteError, PreconditionError
from src.core.isometry import Isometry, compose, distance, identity, inverse, translation


@dataclass(frozen=True)
class GroupSpec:
    dim: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("A group spec needs at least one generator")
        for i, g in enumerate(gens):
            if not isinstance(g, Isometry):
                raise TypeError(f"Generator {i} is not an Isometry")
            if g.n != self.dim:
                raise DimensionMismatchError(f"Generator {i} acts on R^{g.n}, spec says n = {self.dim}")
        object.__setattr__(self, "generators", gens)

    @property
    def max_generator_norm(self) -> float:
        return max(g.translation_norm for g in self.generators)

    def symmetric_generators(self) -> List[Isometry]:
        """Generators together with their inverses, duplicates dropped."""
        seen = {}
        for g in self.generators:
            for h in (g, inverse(g)):
                if h.key not in seen:
                    seen[h.key] = h
        return list(seen.values())


def _features(g: Isometry) -> np.ndarray:
    return np.concatenate([g.ort.ravel(), g.tran])


@dataclass
class GroupBall:
    spec: GroupSpec
    radius: float
    elements: Dict[str, Isometry]
    word_lengths: Dict[str, int]
    max_word_length: int
    complete: bool
    margin: float = 0.0
    incomplete_reason: str = ""
    _norms: Optional[np.ndarray] = field(default=None, repr=False)
    _tree: Optional[cKDTree] = field(default=None, repr=False)
    _tree_keys: List[str] = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Isometry]:
        return iter(self.elements.values())

    def _index(self) -> cKDTree:
        if self._tree is None:
            self._tree_keys = list(self.elements.keys())
            self._tree = cKDTree(np.array([_features(self.elements[k]) for k in self._tree_keys]))
        return self._tree

    def find(self, g: Isometry, tol: float = TOL) -> Optional[Isometry]:
        """
        The stored element within tol of g, or None. A hash hit is confirmed with a
        distance check; a miss falls back to the nearest stored element, since equal
        elements can land in neighbouring quantization cells.
        """
        if g.n != self.spec.dim or not self.elements:
            return None
        limit = tol * max(1.0, g.translation_norm)
        cand = self.elements.get(g.key)
        if cand is not None and distance(cand, g) < limit:
            return cand
        # feature distance is at most sqrt(2) times distance()
        d, i = self._index().query(_features(g), k=1, distance_upper_bound=2.0 * limit)
        if np.isfinite(d):
            cand = self.elements[self._tree_keys[i]]
            if distance(cand, g) < limit:
                return cand
        return None

    def contains(self, g: Isometry, tol: float = TOL) -> bool:
        return self.find(g, tol) is not None

    def norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.array([g.translation_norm for g in self.elements.values()])
        return self._norms

    def sorted_elements(self) -> List[Isometry]:
        """Elements ordered by translation norm, ties broken by key for determinism."""
        return sorted(self.elements.values(), key=lambda g: (round(g.translation_norm, 9), g.key))

    def restrict(self, r: float) -> "GroupBall":
        if r > self.radius + TOL:
            raise ValueError(f"Cannot restrict a ball of radius {self.radius} to {r}")
        keep = {k: g for k, g in self.elements.items() if g.translation_norm <= r + TOL}
        return GroupBall(self.spec, r, keep, {k: self.word_lengths[k] for k in keep},
                         self.max_word_length, self.complete, self.margin, self.incomplete_reason)


def _check_near_collisions(elements: Dict[str, Isometry], words: Dict[str, int],
                           tol: float, near: float) -> None:
    """
    Drop leftover duplicates (distance <= tol, from quantization boundaries) and raise
    NonDiscreteError for distinct elements closer than near.
    """
    if len(elements) < 2:
        return
    keys = list(elements.keys())
    feats = np.array([_features(elements[k]) for k in keys])
    tree = cKDTree(feats)
    pairs = tree.query_pairs(r=near, output_type="ndarray")
    for i, j in pairs:
        ki, kj = keys[i], keys[j]
        if ki not in elements or kj not in elements:
            continue
        d = distance(elements[ki], elements[kj])
        if d <= tol * max(1.0, elements[ki].translation_norm):
            drop = kj if words[kj] >= words[ki] else ki
            logger.debug(f"Merging duplicate element across a hash boundary (d={d:.2e})")
            del elements[drop]
            del words[drop]
        else:
            raise NonDiscreteError(
                f"Two distinct elements lie {d:.3e} apart (< {near}); the group looks non-discrete",
                first=elements[ki], second=elements[kj], distance=d,
            )


def enumerate_ball(spec: GroupSpec, r: float, margin: Optional[float] = None,
                   max_words: int = MAX_WORDS, max_elements: int = MAX_ELEMENTS,
                   tol: float = TOL, near_collision: float = NEAR_COLLISION,
                   show_progress: bool = SHOW_PROGRESS) -> GroupBall:
    """
    Enumerate the group elements with |tran| <= r.

    Words in the generators and their inverses are expanded breadth-first; an element
    is kept while |tran| <= r + margin (default margin: twice the largest generator
    translation). The ball is complete when a full frontier expansion adds nothing new.
    Hitting max_words or max_elements yields complete = False, never a silent cut.

    Args:
        spec: generators of the group
        r: radius of the returned ball
        margin: slack for intermediate words
        max_words: maximal word length explored
        max_elements: cap on retained elements
    """
    if r < 0:
        raise ValueError("Radius must be non-negative")
    if margin is None:
        margin = 2.0 * spec.max_generator_norm
    if margin < 0:
        raise ValueError("Margin must be non-negative")
    bound = r + margin
    gens = spec.symmetric_generators()

    start = identity(spec.dim)
    elements = {start.key: start}
    words = {start.key: 0}
    frontier = [start]
    depth = 0
    complete = False
    reason = ""

    with tqdm(desc="enumerating ball", unit="level", disable=not show_progress) as bar:
        while frontier:
            if depth >= max_words:
                reason = f"word length budget {max_words} exhausted"
                break
            depth += 1
            new_frontier = []
            for g in frontier:
                for s in gens:
                    tran = g.ort @ s.tran + g.tran
                    if np.linalg.norm(tran) > bound:
                        continue
                    h = Isometry(g.ort @ s.ort, tran, check=False)
                    if h.key in elements:
                        continue
                    elements[h.key] = h
                    words[h.key] = depth
                    new_frontier.append(h)
            if len(elements) > max_elements:
                reason = f"element budget {max_elements} exhausted"
                break
            frontier = new_frontier
            bar.update(1)
            logger.debug(f"level {depth}: {len(new_frontier)} new, {len(elements)} total")
        else:
            complete = True

    if not complete:
        logger.warning(f"Ball of radius {r} is incomplete: {reason}")

    _check_near_collisions(elements, words, tol, near_collision)

    inside = {k: g for k, g in elements.items() if g.translation_norm <= r + tol}
    return GroupBall(
        spec=spec,
        radius=float(r),
        elements=inside,
        word_lengths={k: words[k] for k in inside},
        max_word_length=max(words.values()),
        complete=complete,
        margin=float(margin),
        incomplete_reason=reason,
    )


class CosetIndex(NamedTuple):
    index: int
    certified: bool


def _check_membership(ambient: GroupBall, sub: GroupBall, tol: float) -> None:
    if ambient.spec.dim != sub.spec.dim:
        raise DimensionMismatchError("Ambient and sub balls live in different dimensions")
    for g in sub:
        if g.translation_norm <= ambient.radius - tol and not ambient.contains(g, tol):
            raise PreconditionError(f"Subgroup element {g} is not in the ambient ball")


def coset_representatives(ambient: GroupBall, sub: GroupBall, tol: float = TOL) -> List[Isometry]:
    """
    One representative per left coset g Sub met inside the ambient ball, chosen with
    the smallest translation norm. g1, g2 share a coset iff g1^-1 g2 is in sub.
    """
    _check_membership(ambient, sub, tol)
    reps: List[Isometry] = []
    inv_reps: List[Isometry] = []
    for g in ambient.sorted_elements():
        for c_inv in inv_reps:
            if sub.contains(compose(c_inv, g), tol):
                break
        else:
            reps.append(g)
            inv_reps.append(inverse(g))
    return reps


def coset_index(ambient: GroupBall, sub: GroupBall, tol: float = TOL) -> CosetIndex:
    """
    Count left cosets of sub met inside ambient.

    Certified when both balls are complete, no coset first shows up in the outer half
    of the ambient ball, and the sub ball is large enough to answer every coset test.
    """
    reps = coset_representatives(ambient, sub, tol)
    c = max((g.translation_norm for g in reps), default=0.0)
    certified = (ambient.complete and sub.complete
                 and c <= ambient.radius / 2.0
                 and sub.radius + tol >= ambient.radius + c)
    if not certified:
        logger.warning(f"Coset index {len(reps)} is not certified "
                       f"(max representative norm {c:.3f}, ambient radius {ambient.radius})")
    return CosetIndex(len(reps), certified)


def translation_spec(vectors, dim: int) -> GroupSpec:
    return GroupSpec(dim, tuple(translation(v) for v in vectors))
