import os
from dotenv import load_dotenv

load_dotenv()


# Helpers to read typed env vars with defaults
def env_float(name: str, default: float) -> float:
    val = os.getenv(name)
    if val is None or val.strip() == "":
        return default
    try:
        return float(val)
    except ValueError as e:
        raise EnvironmentError(f"Env var {name} must be a number, got {val!r}") from e


def env_int(name: str, default: int) -> int:
    val = os.getenv(name)
    if val is None or val.strip() == "":
        return default
    try:
        return int(val)
    except ValueError as e:
        raise EnvironmentError(f"Env var {name} must be an integer, got {val!r}") from e


def env_bool(name: str, default: bool) -> bool:
    val = os.getenv(name)
    if val is None or val.strip() == "":
        return default
    return val.strip().lower() in ("1", "true", "yes", "on")


def env_radii(name: str, default: str) -> list:
    raw = os.getenv(name) or default
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError as e:
        raise EnvironmentError(f"Env var {name} must be a comma separated list of radii") from e


# Global comparison tolerance τ
TOL = env_float("ISOGROUPS_TOL", 1e-9)
# Grid used to quantize (ort, tran) entries for hashing
HASH_GRID = env_float("ISOGROUPS_HASH_GRID", 1e-6)
# Singular values below this count as zero in fixed point / affine solves
SVD_CUTOFF = env_float("ISOGROUPS_SVD_CUTOFF", 1e-8)
# Distinct elements closer than this are reported as a discreteness failure
NEAR_COLLISION = env_float("ISOGROUPS_NEAR_COLLISION", 1e-4)

MAX_ELEMENTS = env_int("ISOGROUPS_MAX_ELEMENTS", 500_000)
MAX_WORDS = env_int("ISOGROUPS_MAX_WORDS", 100_000)

DEFAULT_RADII = env_radii("ISOGROUPS_DEFAULT_RADII", "8,16,32,64")
SLOPE_RESIDUAL_WARN = env_float("ISOGROUPS_SLOPE_RESIDUAL_WARN", 0.2)

# Rotation angles below this are treated as identity directions
THETA_TOL = env_float("ISOGROUPS_THETA_TOL", 1e-8)
AFFINE_RESIDUAL = env_float("ISOGROUPS_AFFINE_RESIDUAL", 1e-8)

# Heuristic constants for the near-identity commutator property
COMMUTATOR_DELTA0 = env_float("ISOGROUPS_COMMUTATOR_DELTA0", 0.1)
COMMUTATOR_TOL = env_float("ISOGROUPS_COMMUTATOR_TOL", 1e-7)

SHOW_PROGRESS = env_bool("ISOGROUPS_SHOW_PROGRESS", False)
LOG_LEVEL = os.getenv("ISOGROUPS_LOG_LEVEL", "INFO")
