import numpy as np
from dataclasses import dataclass, field

from src.config.settings import TOL
from src.core.errors import DimensionMismatchError


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """
    Affine subspace base + span(basis) of R^n.

    basis is stored as a (k, n) array of orthonormal rows; k may be 0.
    """
    base: np.ndarray
    basis: np.ndarray = field(default=None)

    def __post_init__(self):
        base = np.array(self.base, dtype=float).reshape(-1)
        n = base.shape[0]
        if n < 1:
            raise DimensionMismatchError("Affine subspace needs an ambient dimension n >= 1")
        if self.basis is None or len(self.basis) == 0:
            basis = np.zeros((0, n))
        else:
            basis = np.array(self.basis, dtype=float)
            if basis.ndim == 1:
                basis = basis.reshape(1, -1)
        if basis.shape[1] != n:
            raise DimensionMismatchError(
                f"Basis vectors have length {basis.shape[1]}, base point has length {n}"
            )
        if basis.shape[0] > n:
            raise ValueError(f"{basis.shape[0]} basis vectors cannot be independent in R^{n}")
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(basis.shape[0]), atol=1e3 * TOL):
            raise ValueError("Basis vectors of an affine subspace must be orthonormal")
        base.setflags(write=False)
        basis.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_span(cls, base, vectors=None, tol: float = TOL) -> "AffineSubspace":
        """Orthonormalize arbitrary spanning vectors (possibly dependent)."""
        base = np.asarray(base, dtype=float).reshape(-1)
        if vectors is None or len(vectors) == 0:
            return cls(base)
        mat = np.atleast_2d(np.asarray(vectors, dtype=float))
        _, s, vt = np.linalg.svd(mat, full_matrices=False)
        rank = int(np.sum(s > max(tol, 1e-8) * max(1.0, s[0])))
        return cls(base, vt[:rank])

    @classmethod
    def whole_space(cls, n: int) -> "AffineSubspace":
        return cls(np.zeros(n), np.eye(n))

    @property
    def n(self) -> int:
        return self.base.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def direction_projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def project(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.base + self.basis.T @ (self.basis @ (x - self.base))

    def distance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.project(x)))

    def distances(self, points) -> np.ndarray:
        """Distances of the rows of an (m, n) array to the subspace."""
        diff = np.atleast_2d(np.asarray(points, dtype=float)) - self.base
        return np.linalg.norm(diff - diff @ self.direction_projector(), axis=1)

    def contains(self, x, tol: float = TOL) -> bool:
        return self.distance(x) <= tol * max(1.0, float(np.linalg.norm(x)))

    def direction_contains(self, v, tol: float = TOL) -> bool:
        v = np.asarray(v, dtype=float)
        resid = v - self.basis.T @ (self.basis @ v)
        return float(np.linalg.norm(resid)) <= tol * max(1.0, float(np.linalg.norm(v)))

    def is_linear(self, tol: float = TOL) -> bool:
        return self.distance(np.zeros(self.n)) <= tol

    def closest_to_origin(self) -> np.ndarray:
        return self.project(np.zeros(self.n))

    def linear_part(self) -> "AffineSubspace":
        return AffineSubspace(np.zeros(self.n), self.basis)

    def complement_basis(self) -> np.ndarray:
        """
        Orthonormal basis of the linear orthogonal complement, as columns of an
        (n, n - dim) array. Built by Gram-Schmidt over the standard basis so that
        coordinate-aligned subspaces get coordinate-aligned complements.
        """
        chosen = [row for row in self.basis]
        cols = []
        for i in range(self.n):
            v = np.zeros(self.n)
            v[i] = 1.0
            for q in chosen:
                v = v - np.dot(q, v) * q
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                v = v / norm
                chosen.append(v)
                cols.append(v)
            if len(cols) == self.n - self.dim:
                break
        if not cols:
            return np.zeros((self.n, 0))
        return np.column_stack(cols)

    def is_parallel(self, other: "AffineSubspace", tol: float = TOL) -> bool:
        """True when other = self + a for some vector a."""
        if other.n != self.n:
            raise DimensionMismatchError(f"Subspaces live in R^{self.n} and R^{other.n}")
        if other.dim != self.dim:
            return False
        return np.allclose(self.direction_projector(), other.direction_projector(), atol=1e3 * tol)

    def __repr__(self):
        return f"AffineSubspace(n={self.n}, dim={self.dim}, base={np.round(self.base, 6).tolist()})"
