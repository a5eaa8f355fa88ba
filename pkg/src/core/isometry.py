"""
Arithmetic on single Euclidean isometries x -> ort @ x + tran.

E(n) is handled as the semidirect product O(n) x R^n with
(A, a) o (B, b) = (AB, Ab + a) and (A, a)^-1 = (A^T, -A^T a).
"""

import numpy as np
from dataclasses import dataclass, InitVar
from typing import Optional

from src.config.settings import TOL, SVD_CUTOFF
from src.core.errors import DimensionMismatchError, NotOrthogonalError
from src.core.hash_utils import make_key
from src.core.subspace import AffineSubspace


def check_orthogonal(mat, tol: float = TOL, name: str = "matrix") -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
        raise DimensionMismatchError(f"{name} must be a square n x n matrix, got shape {mat.shape}")
    n = mat.shape[0]
    resid = np.max(np.abs(mat.T @ mat - np.eye(n)))
    # accumulated products drift slowly, so allow a little slack over tol
    if resid > max(tol, 1e-12) * 1e3:
        raise NotOrthogonalError(f"{name} is not orthogonal (|M^T M - I| = {resid:.3e})")
    return mat


@dataclass(frozen=True, eq=False)
class Isometry:
    ort: np.ndarray
    tran: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check):
        ort = np.array(self.ort, dtype=float)
        tran = np.array(self.tran, dtype=float).reshape(-1)
        if check:
            check_orthogonal(ort, name="ort")
            if ort.shape[0] != tran.shape[0]:
                raise DimensionMismatchError(
                    f"ort is {ort.shape[0]}x{ort.shape[0]} but tran has length {tran.shape[0]}"
                )
        ort.setflags(write=False)
        tran.setflags(write=False)
        object.__setattr__(self, "ort", ort)
        object.__setattr__(self, "tran", tran)

    @property
    def n(self) -> int:
        return self.tran.shape[0]

    @property
    def key(self) -> str:
        k = self.__dict__.get("_key")
        if k is None:
            k = make_key(self.ort, self.tran)
            object.__setattr__(self, "_key", k)
        return k

    @property
    def translation_norm(self) -> float:
        return float(np.linalg.norm(self.tran))

    def __call__(self, x):
        return apply(self, x)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return other.n == self.n and distance(self, other) < TOL

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return (f"Isometry(n={self.n}, ort={np.round(self.ort, 6).tolist()}, "
                f"tran={np.round(self.tran, 6).tolist()})")

    def to_dict(self) -> dict:
        return {"ort": self.ort.tolist(), "tran": self.tran.tolist()}


def _same_dim(g: Isometry, h: Isometry):
    if g.n != h.n:
        raise DimensionMismatchError(f"Isometries act on R^{g.n} and R^{h.n}")


def identity(n: int) -> Isometry:
    return Isometry(np.eye(n), np.zeros(n), check=False)


def translation(vector) -> Isometry:
    v = np.asarray(vector, dtype=float).reshape(-1)
    return Isometry(np.eye(v.shape[0]), v, check=False)


def apply(g: Isometry, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != g.n:
        raise DimensionMismatchError(f"Point has length {x.shape[-1]}, isometry acts on R^{g.n}")
    return x @ g.ort.T + g.tran


def compose(g: Isometry, h: Isometry) -> Isometry:
    """(g o h)(x) = g(h(x))."""
    _same_dim(g, h)
    return Isometry(g.ort @ h.ort, g.ort @ h.tran + g.tran, check=False)


def inverse(g: Isometry) -> Isometry:
    inv = g.ort.T
    return Isometry(inv, -inv @ g.tran, check=False)


def power(g: Isometry, k: int) -> Isometry:
    base = g if k >= 0 else inverse(g)
    result = identity(g.n)
    for _ in range(abs(int(k))):
        result = compose(result, base)
    return result


def distance(g: Isometry, h: Isometry) -> float:
    _same_dim(g, h)
    return float(max(np.linalg.norm(g.ort - h.ort), np.linalg.norm(g.tran - h.tran)))


def is_identity(g: Isometry, tol: float = TOL) -> bool:
    return distance(g, identity(g.n)) < tol


def is_translation(g: Isometry, tol: float = TOL) -> bool:
    return float(np.linalg.norm(g.ort - np.eye(g.n))) < tol


def commutator(g: Isometry, h: Isometry) -> Isometry:
    """[g, h] = g h g^-1 h^-1."""
    _same_dim(g, h)
    return compose(g, compose(h, compose(inverse(g), inverse(h))))


def fixed_point_space(g: Isometry, cutoff: float = SVD_CUTOFF, tol: float = TOL) -> Optional[AffineSubspace]:
    """
    Solve (ort - I) x = -tran. Returns the affine solution set, or None when the
    system is inconsistent (for instance a glide reflection).

    Only the identity (at tol) gets the whole space. An isometry that clears the
    SVD cutoff everywhere without being the identity is solved again with tol as
    both the singular value cutoff and the residual bound.
    """
    m = g.ort - np.eye(g.n)
    u, s, vt = np.linalg.svd(m)
    keep = s > cutoff
    if not keep.any() and not is_identity(g, tol):
        cutoff = tol
        keep = s > cutoff
    # minimum-norm solution through the truncated pseudo-inverse
    coeffs = (u.T @ -g.tran)[keep] / s[keep]
    x = vt[keep].T @ coeffs
    residual = float(np.linalg.norm(m @ x + g.tran))
    if residual > cutoff:
        return None
    null_basis = vt[~keep]
    return AffineSubspace(x, null_basis)


def power_near_identity(q, eps: float, m_max: int, tol: float = TOL) -> Optional[int]:
    """
    Smallest m in [1, m_max] with ||Q^m - I|| < eps (operator norm), or None.
    Some such m always exists once m_max is large enough, by compactness of O(n).
    """
    q = check_orthogonal(q, tol=tol, name="Q")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    n = q.shape[0]
    eye = np.eye(n)
    p = eye.copy()
    for m in range(1, int(m_max) + 1):
        p = p @ q
        if np.linalg.norm(p - eye, ord=2) < eps:
            return m
        # re-orthonormalize now and then so long scans do not drift
        if m % 4096 == 0:
            u, _, vt = np.linalg.svd(p)
            p = u @ vt
    return None


def orthogonal_commutator(p, q) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return p @ q @ p.T @ q.T


def commutes(p, q, tol: float = TOL) -> bool:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(np.linalg.norm(p @ q - q @ p)) < tol


def rotation_2d(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def plane_rotation(n: int, i: int, j: int, theta: float) -> np.ndarray:
    """Rotation by theta in the (e_i, e_j) coordinate plane of R^n."""
    r = np.eye(n)
    c, s = np.cos(theta), np.sin(theta)
    r[i, i], r[i, j] = c, -s
    r[j, i], r[j, j] = s, c
    return r


