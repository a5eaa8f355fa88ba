import numpy as np
from dataclasses import dataclass

from src.config.settings import TOL
from src.core.errors import DimensionMismatchError
from src.core.isometry import Isometry, check_orthogonal


@dataclass(frozen=True, eq=False)
class ConformalMap:
    """Linear conformal map A = scale * rot with rot orientation preserving."""
    scale: float
    rot: np.ndarray

    def __post_init__(self):
        scale = float(self.scale)
        if not scale > 0:
            raise ValueError(f"Conformal scale must be positive, got {self.scale}")
        rot = np.array(check_orthogonal(self.rot, name="rot"), dtype=float)
        det = np.linalg.det(rot)
        if abs(det - 1.0) > 1e3 * TOL:
            raise ValueError(f"rot must have determinant +1, got {det:.6f}")
        rot.setflags(write=False)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "rot", rot)

    @classmethod
    def scaling(cls, scale: float, n: int) -> "ConformalMap":
        return cls(scale, np.eye(n))

    @property
    def n(self) -> int:
        return self.rot.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self.scale * self.rot

    @property
    def is_expanding(self) -> bool:
        return self.scale > 1.0

    def inverse(self) -> "ConformalMap":
        return ConformalMap(1.0 / self.scale, self.rot.T)

    def power(self, m: int) -> "ConformalMap":
        if m < 0:
            return self.inverse().power(-m)
        return ConformalMap(self.scale ** m, np.linalg.matrix_power(self.rot, m))

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T

    def to_dict(self) -> dict:
        return {"scale": self.scale, "rot": self.rot.tolist()}


def conjugate_by_conformal(a: ConformalMap, g: Isometry) -> Isometry:
    """theta_A(g) = A g A^-1: orthogonal part rot ort rot^T, translation A tran."""
    if a.n != g.n:
        raise DimensionMismatchError(f"Conformal map acts on R^{a.n}, isometry on R^{g.n}")
    return Isometry(a.rot @ g.ort @ a.rot.T, a.scale * (a.rot @ g.tran), check=False)
