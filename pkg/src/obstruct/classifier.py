"""
Obstruction classifier over (n, k, l) = (ambient dimension, dim Gamma, dim Gamma_T).

All inequalities are decided with integer cross-multiplication.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List


class Verdict(str, Enum):
    THM12 = "InfiniteMultiplicityThm12"
    THM13 = "InfiniteMultiplicityThm13"
    UNKNOWN = "Unknown"
    NO_OBSTRUCTION = "NoObstructionClaimed"
    INVALID = "InvalidInput"


@dataclass
class ObstructionReport:
    n: int
    k: int
    l: int
    verdict: Verdict
    evidence: dict = field(default_factory=dict)
    applicable: List[Verdict] = field(default_factory=list)
    conjecture_gap: bool = False
    lattes_incompatible: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "verdict": self.verdict.value,
            "evidence": self.evidence,
            "applicable": [v.value for v in self.applicable],
            "conjecture_gap": self.conjecture_gap,
            "lattes_incompatible": self.lattes_incompatible,
            "notes": self.notes,
        }


def condition_11(n: int, k: int, l: int) -> bool:
    """l / k > 1 / (n - k), for 0 < k < n."""
    if not 0 < k < n:
        raise ValueError(f"condition needs 0 < k < n, got n={n}, k={k}")
    return l * (n - k) > k


def exponent_condition(n: int, k: int, l: int) -> bool:
    """n - k - n (n-k-1)/(n-l-1) < 0, for 0 < k <= n-2, 0 <= l <= k, l < n-1."""
    if not 0 < k <= n - 2:
        raise ValueError(f"exponent condition needs 0 < k <= n - 2, got n={n}, k={k}")
    if not 0 <= l <= k or l >= n - 1:
        raise ValueError(f"exponent condition needs 0 <= l <= k and l < n - 1, got l={l}")
    return (n - k) * (n - l - 1) < n * (n - k - 1)


def is_valid_triple(n: int, k: int, l: int) -> bool:
    if n < 1 or not 0 <= l <= k <= n:
        return False
    # a group of dimension >= n-1 has a translation subgroup of the same dimension
    return not (k >= n - 1 and l < k)


def classify(n: int, k: int, l: int, lattes_expanding: bool = False) -> ObstructionReport:
    """
    Which infinite-multiplicity theorem the triple satisfies, if any.

    Args:
        lattes_expanding: caller asserts Gamma belongs to a Lattes triple with an
            expanding A; dimensions outside {0, n-1, n} are then flagged as incompatible
    """
    if not is_valid_triple(n, k, l):
        return ObstructionReport(n, k, l, Verdict.INVALID,
                                 notes=["need 0 <= l <= k <= n, and l = k whenever k >= n - 1"])

    if k in (0, n - 1, n):
        return ObstructionReport(n, k, l, Verdict.NO_OBSTRUCTION,
                                 evidence={"dimension_in_0_n1_n": True})

    c11 = condition_11(n, k, l)
    evidence = {
        "condition_11": c11,
        "condition_11_lhs": l * (n - k),
        "condition_11_rhs": k,
        "exponent_condition": exponent_condition(n, k, l),
        "exponent_lhs": (n - k) * (n - l - 1),
        "exponent_rhs": n * (n - k - 1),
        "k_below_n_minus_2": k < n - 2,
    }
    applicable = []
    if c11:
        applicable.append(Verdict.THM12)
    if k < n - 2:
        applicable.append(Verdict.THM13)

    report = ObstructionReport(n, k, l, applicable[0] if applicable else Verdict.UNKNOWN,
                               evidence, applicable)
    if report.verdict is Verdict.UNKNOWN:
        report.conjecture_gap = True
        report.notes.append("dim Gamma = n - 2 without condition (1.1): conjectured but open")
    if lattes_expanding:
        report.lattes_incompatible = True
        report.notes.append("an expanding Lattes triple forces dim Gamma in {0, n-1, n}")
    report.notes.append("verdict concerns the group-level hypotheses only, not a concrete map")
    return report
