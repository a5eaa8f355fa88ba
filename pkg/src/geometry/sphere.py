"""
Points on S^m that stay away from a weighted sequence x_1, x_2, ...

The score of y is  min_j d(y, x_j) * j^(1/m + eps)  with d the geodesic distance;
sphere_avoidance_point maximizes it over a coarse grid and refines the best
candidates along great circles.
"""

import numpy as np
from dataclasses import dataclass
from typing import Optional

from loguru import logger
from scipy.optimize import minimize_scalar

GOLDEN_RATIO = (1 + np.sqrt(5)) / 2


@dataclass(frozen=True, eq=False)
class AvoidancePoint:
    y: np.ndarray
    C_emp: float
    eps: float

    @property
    def m(self) -> int:
        return self.y.shape[0] - 1


def geodesic_distance(u, v) -> np.ndarray:
    """Great-circle distance; broadcasts over leading axes."""
    dots = np.sum(np.asarray(u, dtype=float) * np.asarray(v, dtype=float), axis=-1)
    return np.arccos(np.clip(dots, -1.0, 1.0))


def fibonacci_sphere(samples: int) -> np.ndarray:
    """Fibonacci spiral points on S^2, as an (samples, 3) array."""
    phi = np.arange(samples) * (2 * np.pi / GOLDEN_RATIO)
    theta = np.arccos(1 - 2 * (np.arange(samples) + 0.5) / samples)
    return np.column_stack([np.cos(phi) * np.sin(theta), np.sin(phi) * np.sin(theta), np.cos(theta)])


def golden_circle(samples: int) -> np.ndarray:
    """x_j = angle 2 pi phi j on S^1, j = 1..samples."""
    ang = 2 * np.pi * GOLDEN_RATIO * np.arange(1, samples + 1)
    return np.column_stack([np.cos(ang), np.sin(ang)])


def candidate_grid(m: int, grid_res: int, seed: int = 0) -> np.ndarray:
    if m == 1:
        ang = 2 * np.pi * np.arange(grid_res) / grid_res
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if m == 2:
        return fibonacci_sphere(grid_res)
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((grid_res, m + 1))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _weights(J: int, m: int, eps: float) -> np.ndarray:
    return np.arange(1, J + 1, dtype=float) ** (1.0 / m + eps)


def avoidance_score(y, seq, eps: float) -> float:
    seq = np.asarray(seq, dtype=float)
    m = seq.shape[1] - 1
    return float(np.min(geodesic_distance(np.asarray(y, dtype=float), seq) * _weights(len(seq), m, eps)))


def grid_scores(grid, seq, eps: float, chunk: int = 4096) -> np.ndarray:
    """Scores of every grid point, computed in chunks to bound memory."""
    grid = np.asarray(grid, dtype=float)
    seq = np.asarray(seq, dtype=float)
    w = _weights(len(seq), seq.shape[1] - 1, eps)
    out = np.empty(len(grid))
    for start in range(0, len(grid), chunk):
        block = grid[start:start + chunk]
        d = np.arccos(np.clip(block @ seq.T, -1.0, 1.0))
        out[start:start + chunk] = np.min(d * w, axis=1)
    return out


def _tangent_basis(y: np.ndarray) -> np.ndarray:
    """Orthonormal basis (rows) of the tangent space of the sphere at y."""
    _, _, vt = np.linalg.svd(y.reshape(1, -1))
    return vt[1:]


def _refine(y: np.ndarray, seq: np.ndarray, eps: float, steps: int, width: float) -> np.ndarray:
    best = avoidance_score(y, seq, eps)
    for _ in range(3):
        for w in _tangent_basis(y):
            res = minimize_scalar(
                lambda t: -avoidance_score(np.cos(t) * y + np.sin(t) * w, seq, eps),
                bounds=(-width, width), method="bounded", options={"maxiter": steps},
            )
            if -res.fun > best:
                cand = np.cos(res.x) * y + np.sin(res.x) * w
                y = cand / np.linalg.norm(cand)
                best = avoidance_score(y, seq, eps)
        width /= 2
    return y


def sphere_avoidance_point(seq, eps: float, grid_res: int = 2000, refine_steps: int = 20,
                           n_refine: int = 8, seed: int = 0) -> AvoidancePoint:
    """
    A point y on S^m with min_j d(y, x_j) j^(1/m + eps) as large as we can find.

    Args:
        seq: (J, m+1) array of unit vectors, in sequence order
        eps: positive exponent slack
        grid_res: coarse grid size
        refine_steps: bounded golden-section iterations per great-circle search
        n_refine: number of best grid points refined
    Returns:
        AvoidancePoint whose C_emp is the score of y, so every j satisfies the bound
    """
    seq = np.atleast_2d(np.asarray(seq, dtype=float))
    if seq.size == 0:
        raise ValueError("Avoidance needs a non-empty sequence")
    if eps <= 0:
        raise ValueError("eps must be positive")
    m = seq.shape[1] - 1
    if m < 1:
        raise ValueError("Sequence must live on S^m with m >= 1")
    norms = np.linalg.norm(seq, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-6):
        raise ValueError("Sequence entries must be unit vectors")
    seq = seq / norms[:, None]

    grid = candidate_grid(m, grid_res, seed)
    scores = grid_scores(grid, seq, eps)
    top = np.argsort(scores)[::-1][:n_refine]
    # a few grid spacings around each candidate
    width = 4.0 * (4 * np.pi / grid_res) ** (1.0 / m)

    best_y: Optional[np.ndarray] = None
    best_score = -np.inf
    for idx in top:
        y = _refine(grid[idx], seq, eps, refine_steps, width)
        score = avoidance_score(y, seq, eps)
        if score > best_score:
            best_y, best_score = y, score
    logger.debug(f"Avoidance point on S^{m}: grid best {scores[top[0]]:.4f}, refined {best_score:.4f}")
    best_y = np.array(best_y)
    best_y.setflags(write=False)
    return AvoidancePoint(best_y, float(best_score), float(eps))
