# src/core/hash_utils.py
import hashlib
import base64
import numpy as np

from src.config.settings import HASH_GRID


def quantize(values, grid: float = HASH_GRID) -> np.ndarray:
    """Round entries to integer multiples of grid (int64, so -0.0 and 0.0 agree)."""
    return np.rint(np.asarray(values, dtype=float) / grid).astype(np.int64)


def make_key(ort, tran, grid: float = HASH_GRID) -> str:
    """
    Create a deterministic, short id for an isometry from its quantized entries.
    Equal ids are only candidates for equality; callers confirm with a tolerance check.
    """
    q = np.concatenate([quantize(ort, grid).reshape(-1), quantize(tran, grid).reshape(-1)])
    h = hashlib.sha1(q.tobytes()).digest()
    return base64.urlsafe_b64encode(h).decode("utf-8").rstrip("=")


def make_matrix_key(mat, grid: float = HASH_GRID) -> str:
    q = quantize(mat, grid).reshape(-1)
    h = hashlib.sha1(q.tobytes()).digest()
    return base64.urlsafe_b64encode(h).decode("utf-8").rstrip("=")
