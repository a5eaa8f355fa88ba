"""
JSON run configs:

{
  "name": "screw",                                   (optional)
  "dim": 3,
  "generators": [{"ort": [[...]], "tran": [...]}],
  "conformal": {"scale": 2.0, "rot": [[...]]},       (optional)
  "pair": {"subgroup_indices": [0],                  (optional; or "subgroup_generators")
           "V": {"base": [...], "basis": [[...]]}},
  "radii": [8, 16, 32, 64],                          (optional)
  "tol": 1e-9                                        (optional)
}

Matrices are row-major.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from src.config.settings import DEFAULT_RADII, TOL
from src.core.conformal import ConformalMap
from src.core.errors import ConfigError, DimensionMismatchError
from src.core.isometry import Isometry
from src.core.subspace import AffineSubspace
from src.groups.enumeration import GroupSpec
from src.groups.translations import TranslationPair


@dataclass
class PipelineConfig:
    name: str
    spec: GroupSpec
    radii: List[float]
    tol: float = TOL
    conformal: Optional[ConformalMap] = None
    pair: Optional[TranslationPair] = None


def _require(raw: dict, key: str, kind, where: str = "config"):
    if key not in raw:
        raise ConfigError(f"{where} is missing the key {key!r}")
    if not isinstance(raw[key], kind):
        raise ConfigError(f"{where}[{key!r}] has the wrong type ({type(raw[key]).__name__})")
    return raw[key]


def _isometry(raw, dim: int, where: str) -> Isometry:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where} must be an object with 'ort' and 'tran'")
    ort = _require(raw, "ort", list, where)
    tran = _require(raw, "tran", list, where)
    if len(tran) != dim or len(ort) != dim or any(not isinstance(row, list) or len(row) != dim for row in ort):
        raise DimensionMismatchError(f"{where} does not act on R^{dim}")
    try:
        return Isometry(ort, tran)
    except (TypeError, ValueError) as e:
        if isinstance(e, DimensionMismatchError):
            raise
        raise ConfigError(f"{where}: {e}") from e


def parse_config(raw: dict, name: str = "config") -> PipelineConfig:
    if not isinstance(raw, dict):
        raise ConfigError("Top level of a config must be an object")
    dim = _require(raw, "dim", int)
    if dim < 1:
        raise ConfigError("dim must be a positive integer")
    gens_raw = _require(raw, "generators", list)
    if not gens_raw:
        raise ConfigError("generators must not be empty")
    gens = tuple(_isometry(g, dim, f"generators[{i}]") for i, g in enumerate(gens_raw))
    spec = GroupSpec(dim, gens)

    radii = raw.get("radii", DEFAULT_RADII)
    if not isinstance(radii, list) or not all(isinstance(r, (int, float)) for r in radii):
        raise ConfigError("radii must be a list of numbers")
    tol = raw.get("tol", TOL)
    if not isinstance(tol, (int, float)) or tol <= 0:
        raise ConfigError("tol must be a positive number")

    conformal = None
    if raw.get("conformal") is not None:
        c = raw["conformal"]
        if not isinstance(c, dict):
            raise ConfigError("conformal must be an object")
        scale = _require(c, "scale", (int, float), "conformal")
        rot = c.get("rot")
        try:
            conformal = ConformalMap.scaling(scale, dim) if rot is None else ConformalMap(scale, rot)
        except ValueError as e:
            raise ConfigError(f"conformal: {e}") from e
        if conformal.n != dim:
            raise DimensionMismatchError(f"conformal map acts on R^{conformal.n}, config says dim {dim}")

    pair = None
    if raw.get("pair") is not None:
        p = raw["pair"]
        if not isinstance(p, dict):
            raise ConfigError("pair must be an object")
        v_raw = _require(p, "V", dict, "pair")
        base = _require(v_raw, "base", list, "pair.V")
        if len(base) != dim:
            raise DimensionMismatchError(f"pair.V.base has length {len(base)}, config says dim {dim}")
        basis = v_raw.get("basis", [])
        if any(not isinstance(b, list) or len(b) != dim for b in basis):
            raise DimensionMismatchError(f"pair.V.basis vectors must have length {dim}")
        V = AffineSubspace.from_span(base, basis, float(tol))
        if "subgroup_generators" in p:
            sub = tuple(_isometry(g, dim, f"pair.subgroup_generators[{i}]")
                        for i, g in enumerate(p["subgroup_generators"]))
        else:
            idx = _require(p, "subgroup_indices", list, "pair")
            if not idx or any(not isinstance(i, int) or not 0 <= i < len(gens) for i in idx):
                raise ConfigError("pair.subgroup_indices must index into generators")
            sub = tuple(gens[i] for i in idx)
        pair = TranslationPair(sub, V)

    return PipelineConfig(str(raw.get("name", name)), spec, [float(r) for r in radii], float(tol),
                          conformal, pair)


def load_config(path) -> PipelineConfig:
    """
    Read and validate a JSON config.

    Raises:
        ConfigError: unreadable file, malformed JSON or schema violation
        DimensionMismatchError: entries disagree with "dim"
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path}: {e}") from e
    return parse_config(raw, name=path.stem)
