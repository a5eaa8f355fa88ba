"""
Growth functions of an enumerated group ball.

    N(r)       elements with |tran| <= r
    Lambda(r)  distinct orthogonal parts among them
    T(r)       pure translations among them
    NV(r)      elements acting on V by translations, with |tran_V| <= r
    LambdaV(r) distinct orthogonal parts among those
"""

import numpy as np
import pandas as pd
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from loguru import logger

from src.config.settings import SLOPE_RESIDUAL_WARN, TOL
from src.core.errors import NotTranslationOnVError, PreconditionError, RadiusError
from src.core.hash_utils import make_matrix_key
from src.core.isometry import is_translation
from src.core.subspace import AffineSubspace
from src.groups.enumeration import GroupBall
from src.groups.translations import tran_V

GROWTH_COLUMNS = ["r", "N", "Lambda", "NV", "LambdaV"]


@dataclass
class GrowthProfile:
    radii: List[float]
    counts_N: List[int]
    counts_Lambda: List[int]
    counts_T: List[int]
    counts_NV: Optional[List[int]] = None
    counts_LambdaV: Optional[List[int]] = None
    dim: int = 0

    def __len__(self):
        return len(self.radii)

    def series(self, name: str) -> Optional[List[int]]:
        return {
            "N": self.counts_N,
            "Lambda": self.counts_Lambda,
            "T": self.counts_T,
            "NV": self.counts_NV,
            "LambdaV": self.counts_LambdaV,
        }[name]

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame({"r": self.radii})
        for name in ("N", "Lambda", "NV", "LambdaV", "T"):
            values = self.series(name)
            if values is None:
                df[name] = pd.array([pd.NA] * len(self.radii), dtype="Int64")
            else:
                df[name] = pd.array(values, dtype="Int64")
        return df

    def to_dict(self) -> dict:
        return {"r": list(self.radii), "N": list(self.counts_N), "Lambda": list(self.counts_Lambda),
                "NV": self.counts_NV, "LambdaV": self.counts_LambdaV, "T": list(self.counts_T)}

    def to_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame()[GROWTH_COLUMNS].to_csv(path, index=False)
        return path


@dataclass
class DimensionEstimate:
    k_hat: int
    slope: float
    residual: float
    warning: bool = False
    use: str = "N"

    def to_dict(self) -> dict:
        return {"k_hat": self.k_hat, "slope": self.slope, "residual": self.residual,
                "warning": self.warning, "use": self.use}


@dataclass
class LemmaCheck:
    holds: bool
    first_violation: Optional[float] = None
    checked: int = 0


@dataclass
class LemmaReport:
    checks: Dict[str, LemmaCheck] = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks.values())

    def __getitem__(self, name: str) -> LemmaCheck:
        return self.checks[name]

    def to_dict(self) -> dict:
        return {name: {"holds": c.holds, "first_violation": c.first_violation, "checked": c.checked}
                for name, c in self.checks.items()}


def _distinct_upto(norms: np.ndarray, keys: List[str], radii: Sequence[float], tol: float) -> List[int]:
    """Number of distinct keys among entries with norm <= r, for each r (radii increasing)."""
    order = np.argsort(norms, kind="stable")
    seen = set()
    out = []
    pos = 0
    for r in radii:
        while pos < len(order) and norms[order[pos]] <= r + tol:
            seen.add(keys[order[pos]])
            pos += 1
        out.append(len(seen))
    return out


def growth_profile(ball: GroupBall, radii: Sequence[float], V: Optional[AffineSubspace] = None,
                   tol: float = TOL) -> GrowthProfile:
    """
    Sample the growth functions of ball on radii.

    Raises:
        RadiusError: max(radii) exceeds the ball radius (plus 2 d(0, V) when V is given)
    """
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("Radii must be strictly increasing")
    if radii and radii[0] < 0:
        raise ValueError("Radii must be non-negative")
    dim = ball.spec.dim
    if not radii:
        return GrowthProfile([], [], [], [], [] if V is not None else None,
                             [] if V is not None else None, dim)
    if radii[-1] > ball.radius + tol:
        raise RadiusError(f"Radius {radii[-1]} exceeds the enumerated ball radius {ball.radius}")
    if not ball.complete:
        logger.warning("Growth profile taken from an incomplete ball; counts are lower bounds")

    elements = list(ball)
    norms = np.array([g.translation_norm for g in elements])
    ort_keys = [make_matrix_key(g.ort) for g in elements]
    counts_N = [int(np.count_nonzero(norms <= r + tol)) for r in radii]
    counts_Lambda = _distinct_upto(norms, ort_keys, radii, tol)
    trans_mask = np.array([is_translation(g, tol) for g in elements])
    counts_T = [int(np.count_nonzero(trans_mask & (norms <= r + tol))) for r in radii]

    counts_NV = counts_LambdaV = None
    if V is not None:
        d0 = float(np.linalg.norm(V.closest_to_origin()))
        if radii[-1] + 2.0 * d0 > ball.radius + tol:
            raise RadiusError(
                f"NV counts at r = {radii[-1]} need a ball of radius {radii[-1] + 2.0 * d0:.3f}, "
                f"have {ball.radius}"
            )
        v_norms, v_keys = [], []
        for g, key in zip(elements, ort_keys):
            try:
                v_norms.append(float(np.linalg.norm(tran_V(g, V, tol))))
                v_keys.append(key)
            except NotTranslationOnVError:
                continue
        v_norms = np.array(v_norms)
        counts_NV = [int(np.count_nonzero(v_norms <= r + tol)) for r in radii]
        counts_LambdaV = _distinct_upto(v_norms, v_keys, radii, tol)

    return GrowthProfile(radii, counts_N, counts_Lambda, counts_T, counts_NV, counts_LambdaV, dim)


def estimate_dimension(profile: GrowthProfile, use: str = "N",
                       residual_warn: float = SLOPE_RESIDUAL_WARN) -> DimensionEstimate:
    """
    Least-squares slope of log count against log r.

    Args:
        profile: sampled growth functions
        use: "N", "NV" or "Lambda"
    Returns:
        DimensionEstimate with k_hat = round(slope) clipped to [0, n]
    """
    if use not in ("N", "NV", "Lambda"):
        raise ValueError(f"use must be one of N, NV, Lambda; got {use!r}")
    counts = profile.series(use)
    if counts is None:
        raise ValueError(f"Profile has no {use} counts (no V was supplied)")
    radii = np.asarray(profile.radii, dtype=float)
    if len(radii) < 4 or radii[0] <= 0 or radii[-1] / radii[0] < 4.0:
        raise PreconditionError("Dimension fit needs at least 4 positive radii spanning a factor of 4")
    counts = np.asarray(counts, dtype=float)
    if np.any(counts <= 0):
        raise ValueError("Some counts are zero; use larger radii so every sample sees an element")

    x, y = np.log(radii), np.log(counts)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    k_hat = int(min(max(round(float(slope)), 0), profile.dim))
    warning = residual > residual_warn
    if warning:
        logger.warning(f"Log-log fit residual {residual:.3f} exceeds {residual_warn}; k_hat={k_hat} is shaky")
    return DimensionEstimate(k_hat, float(slope), residual, warning, use)


class _Grid:
    """Lookups of a monotone count on a radius grid that never produce a false violation."""

    def __init__(self, radii: Sequence[float], counts: Sequence[int], tol: float):
        self.radii = np.asarray(radii, dtype=float)
        self.counts = list(counts)
        self.tol = tol

    def below(self, x: float) -> int:
        # largest grid radius <= x; 0 is a safe lower bound below the grid
        idx = int(np.searchsorted(self.radii, x + self.tol, side="right")) - 1
        return self.counts[idx] if idx >= 0 else 0

    def above(self, x: float) -> Optional[int]:
        # smallest grid radius >= x, or None when the grid ends first
        idx = int(np.searchsorted(self.radii, x - self.tol, side="left"))
        return self.counts[idx] if idx < len(self.counts) else None


def _run_check(rows) -> LemmaCheck:
    checked = 0
    for r, lhs, rhs in rows:
        if lhs is None or rhs is None:
            continue
        checked += 1
        if lhs > rhs:
            return LemmaCheck(False, r, checked)
    return LemmaCheck(True, None, checked)


def check_growth_lemmas(ambient: GrowthProfile, sub: GrowthProfile, m: int, C: float,
                        dV: float = 0.0, tol: float = TOL) -> LemmaReport:
    """
    Check the counting inequalities relating a group, a finite-index subgroup and a
    translation pair on a common radius grid:

        N_G(r) <= N_Gamma(r) <= m N_G(r + C)
        N_G^V(r - 2 dV) <= N_G(r) <= N_G^V(r)            (when sub has NV counts)
        N_Gamma(r) <= Lambda_Gamma(r) N_T(2r)
        Lambda_Gamma(r) N_T(r) <= N_Gamma(2r)

    Raises:
        RadiusError: the grid has no radius with room for the r + C or 2r lookups
    """
    if list(ambient.radii) != list(sub.radii):
        raise ValueError("Profiles must share one radius grid")
    if m < 1 or C < 0 or dV < 0:
        raise ValueError("Need m >= 1, C >= 0 and dV >= 0")
    radii = list(ambient.radii)
    N_amb = _Grid(radii, ambient.counts_N, tol)
    N_sub = _Grid(radii, sub.counts_N, tol)
    T_amb = _Grid(radii, ambient.counts_T, tol)
    report = LemmaReport()

    report.checks["sandwich_lower"] = _run_check(
        (r, sub.counts_N[i], ambient.counts_N[i]) for i, r in enumerate(radii))
    upper_rows = []
    for i, r in enumerate(radii):
        ref = N_sub.above(r + C)
        upper_rows.append((r, ambient.counts_N[i], None if ref is None else m * ref))
    report.checks["sandwich_upper"] = _run_check(upper_rows)

    if sub.counts_NV is not None:
        NV_sub = _Grid(radii, sub.counts_NV, tol)
        report.checks["V_lower"] = _run_check(
            (r, NV_sub.below(r - 2.0 * dV), sub.counts_N[i]) for i, r in enumerate(radii))
        report.checks["V_upper"] = _run_check(
            (r, sub.counts_N[i], sub.counts_NV[i]) for i, r in enumerate(radii))

    orth_lower, orth_upper = [], []
    for i, r in enumerate(radii):
        t2 = T_amb.above(2.0 * r)
        orth_lower.append((r, ambient.counts_N[i],
                           None if t2 is None else ambient.counts_Lambda[i] * t2))
        orth_upper.append((r, ambient.counts_Lambda[i] * ambient.counts_T[i], N_amb.above(2.0 * r)))
    report.checks["orth_lower"] = _run_check(orth_lower)
    report.checks["orth_upper"] = _run_check(orth_upper)

    for name in ("sandwich_upper", "orth_lower", "orth_upper"):
        if report.checks[name].checked == 0:
            raise RadiusError(f"Radius grid has no headroom for the {name} lookups")
    for name, check in report.checks.items():
        if not check.holds:
            logger.warning(f"Growth inequality {name} fails at r = {check.first_violation}")
    return report
