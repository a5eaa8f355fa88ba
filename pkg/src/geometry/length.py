import numpy as np
from scipy.optimize import lsq_linear

from loguru import logger

from src.config.settings import TOL
from src.core.errors import NotTranslationOnVError, PreconditionError
from src.core.subspace import AffineSubspace
from src.geometry.selection import HalfLine
from src.groups.enumeration import GroupBall
from src.groups.translations import tran_V


def _check_triple(n: int, k: int, l: int, eps: float):
    if not 0 < k < n - 1:
        raise ValueError(f"Need 0 < k < n - 1, got n={n}, k={k}")
    if not 0 <= l <= k or l >= n - 1:
        raise ValueError(f"Need 0 <= l <= k and l < n - 1, got k={k}, l={l}")
    if eps < 0:
        raise ValueError("eps must be non-negative")


def length_exponent(n: int, k: int, l: int, eps: float = 0.0) -> float:
    _check_triple(n, k, l, eps)
    return (n - k - 1) / (n - l - 1) - eps


def length_lower_bound(n: int, k: int, l: int, eps: float, s: float, C: float) -> float:
    """
    C s^((n-k-1)/(n-l-1) - eps): lower bound for the length of a path from L1 to the
    orbit of L2 that stays at distance >= s from V.
    """
    if s < 1:
        raise ValueError(f"The bound needs s >= 1, got {s}")
    if C <= 0:
        raise ValueError("C must be positive")
    return float(C * s ** length_exponent(n, k, l, eps))


def crossing_radius(s: float, C: float, n: int, k: int, l: int, eps: float = 0.0) -> float:
    """r* solving s C = r^(1 + (k-l)/(n-k-1) + eps), where the two path-length bounds meet."""
    _check_triple(n, k, l, eps)
    if s <= 0 or C <= 0:
        raise ValueError("s and C must be positive")
    return float((s * C) ** (1.0 / (1.0 + (k - l) / (n - k - 1) + eps)))


def length_lower_bound_sup(n: int, k: int, l: int, eps: float, s: float, r_sup: float, C: float) -> float:
    """
    Bound in terms of both the closest (s) and farthest (r_sup) distance from V:
    the s-bound when s >= r_sup / 2, otherwise the path has length >= r_sup / 2.
    """
    if not 1 <= s <= r_sup:
        raise ValueError(f"Need 1 <= s <= r_sup, got s={s}, r_sup={r_sup}")
    if s >= r_sup / 2:
        return length_lower_bound(n, k, l, eps, s, C)
    return float(r_sup / 2)


def brute_force_min_connection(ball: GroupBall, V: AffineSubspace, L1: HalfLine, L2: HalfLine,
                               s: float, tol: float = TOL) -> float:
    """
    Shortest straight segment from a point of L1 to a point of gamma L2, gamma in the
    ball, with both endpoints at distance >= s from V. Half-lines are given in R^n.

    For p = a u and q = b ort(gamma) w + tran(gamma) the clearances are a and b, so
    each gamma is a two-variable bounded least-squares problem.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    if not V.is_linear(tol):
        raise PreconditionError("Segment search needs a linear V")
    u, w = L1.direction, L2.direction
    for name, d in (("L1", u), ("L2", w)):
        if d.shape[0] != V.n:
            raise ValueError(f"{name} lives in R^{d.shape[0]}, V in R^{V.n}")
        if V.dim and float(np.linalg.norm(V.basis @ d)) > 1e3 * tol:
            raise PreconditionError(f"{name} is not contained in V^perp")

    best = np.inf
    seen = 0
    for g in ball:
        try:
            tran_V(g, V, tol)
        except NotTranslationOnVError:
            continue
        seen += 1
        system = np.column_stack([u, -(g.ort @ w)])
        res = lsq_linear(system, g.tran, bounds=([s, s], [np.inf, np.inf]))
        length = float(np.linalg.norm(system @ res.x - g.tran))
        best = min(best, length)
    if seen == 0:
        raise ValueError("No element of the ball preserves V")
    logger.debug(f"Minimal connection over {seen} elements at clearance {s}: {best:.6f}")
    return best
