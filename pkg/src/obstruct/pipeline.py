"""
End-to-end analysis of one config: enumeration, growth, dimension, optional
conjugation and half-line selection, classification, report files.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from src.config.paths import REPORTS_DIR
from src.conjugate.conformal_analysis import (
    check_conjugation_invariance,
    conjugation_index,
    linearize_pair,
    verify_translation_dim_theorem,
)
from src.core.errors import (
    ConfigError,
    IsogroupsError,
    LatticeError,
    NonCommutingError,
    SingleBlockError,
)
from src.geometry.selection import (
    restrict_orthogonal,
    select_avoiding_halflines,
    select_orthogonal_halflines,
    simultaneous_block_diagonalize,
)
from src.groups.enumeration import enumerate_ball
from src.groups.translations import lattice_basis, translation_subgroup, verify_translation_pair
from src.growth.profile import GrowthProfile, estimate_dimension, growth_profile
from src.obstruct.classifier import Verdict, classify
from src.obstruct.config_loader import PipelineConfig, load_config

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3
EXIT_PARSE = 4


@dataclass
class PipelineResult:
    exit_code: int
    report: dict = field(default_factory=dict)
    report_path: Optional[Path] = None
    growth_path: Optional[Path] = None


def _selection_section(config: PipelineConfig, r: float) -> dict:
    pair = config.pair
    V = pair.V
    if not V.is_linear(config.tol):
        return {"status": "skipped", "reason": "V is not linear"}
    if V.dim == V.n:
        return {"status": "skipped", "reason": "V^perp is trivial"}
    ball = enumerate_ball(pair.subgroup_spec(), r, tol=config.tol)
    frame = V.complement_basis()
    mats = restrict_orthogonal(ball, V, config.tol)
    try:
        decomp = simultaneous_block_diagonalize(mats, config.tol)
    except NonCommutingError as e:
        return {"status": "non_commuting", "reason": str(e)}
    section = {"block_dims": decomp.dims}
    try:
        L1, L2 = select_orthogonal_halflines(decomp)
        section.update(status="orthogonal",
                       L1=L1.lift(frame).direction.tolist(), L2=L2.lift(frame).direction.tolist())
    except SingleBlockError:
        if frame.shape[1] < 2:
            section.update(status="single_block", reason="V^perp is a line")
            return section
        L1, L2, point = select_avoiding_halflines(ball, V, tol=config.tol)
        section.update(status="avoiding", C_emp=point.C_emp, eps=point.eps,
                       L1=L1.lift(frame).direction.tolist(), L2=L2.lift(frame).direction.tolist())
    return section


def analyze(config: PipelineConfig) -> Tuple[dict, GrowthProfile]:
    """Run every analysis the config supports; returns the report as a plain dict and the growth profile."""
    tol = config.tol
    spec = config.spec
    radii = sorted(config.radii)
    r_max = max(radii) if radii else 0.0
    d0 = float(np.linalg.norm(config.pair.V.closest_to_origin())) if config.pair else 0.0

    logger.info(f"[{config.name}] enumerating ball of radius {r_max + 2 * d0:g} in R^{spec.dim}")
    ball = enumerate_ball(spec, r_max + 2 * d0, tol=tol)
    profile = growth_profile(ball, radii, config.pair.V if config.pair else None, tol)
    report = {
        "name": config.name,
        "n": spec.dim,
        "ball": {"radius": ball.radius, "elements": len(ball), "complete": ball.complete,
                 "max_word_length": ball.max_word_length, "reason": ball.incomplete_reason},
        "growth": profile.to_dict(),
    }

    estimate = estimate_dimension(profile)
    report["dimension"] = estimate.to_dict()
    try:
        l_rank = lattice_basis(translation_subgroup(ball, tol), tol).rank
    except LatticeError as e:
        logger.warning(f"[{config.name}] translation lattice: {e}")
        l_rank = None
    report["translation_rank"] = l_rank

    if config.pair is not None:
        logger.info(f"[{config.name}] checking the translation pair")
        report["pair"] = verify_translation_pair(spec, config.pair, r_max, tol=tol).to_dict()
        report["selection"] = _selection_section(config, r_max)

    lattes = False
    if config.conformal is not None:
        A = config.conformal
        logger.info(f"[{config.name}] conjugation by scale {A.scale:g}")
        verdict = check_conjugation_invariance(A, spec, tol=tol)
        section = {"verdict": verdict.to_dict()}
        if verdict.holds:
            idx = conjugation_index(A, spec, tol=tol)
            section["index"] = {"index": idx.index, "certified": idx.certified}
            lattes = A.is_expanding
        if A.is_expanding:
            section["theorem"] = verify_translation_dim_theorem(spec, A, radii, tol).to_dict()
            if verdict.holds and config.pair is not None:
                lin = linearize_pair(A, config.pair, spec, tol=tol)
                section["linearization"] = {"status": lin.status, "m": lin.m, "reason": lin.reason,
                                            "heuristic_generators": lin.heuristic_generators}
        report["conjugation"] = section

    k = estimate.k_hat
    l = l_rank if l_rank is not None else 0
    report["classification"] = classify(spec.dim, k, l, lattes_expanding=lattes).to_dict()
    # l = 0 stands in for an unknown translation rank; the run is inconclusive
    report["classification"]["l_substituted"] = l_rank is None
    return report, profile


def run_pipeline(config_path, out_dir=None) -> PipelineResult:
    """
    Analyze one config and write report.json and growth.csv.

    Exit codes: 0 success, 2 invalid input, 3 incomplete enumeration or unknown
    translation rank, 4 unreadable config.
    """
    try:
        config = load_config(config_path)
    except ConfigError as e:
        logger.error(str(e))
        return PipelineResult(EXIT_PARSE, {"error": str(e)})
    except IsogroupsError as e:
        logger.error(str(e))
        return PipelineResult(EXIT_INVALID, {"error": str(e)})

    out_dir = Path(out_dir) if out_dir is not None else REPORTS_DIR / config.name
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        report, profile = analyze(config)
    except (IsogroupsError, ValueError) as e:
        logger.error(f"[{config.name}] {e}")
        return PipelineResult(EXIT_INVALID, {"name": config.name, "error": str(e)})

    growth_path = profile.to_csv(out_dir / "growth.csv")
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(report, indent=2, default=str), encoding="utf-8")

    if not report["ball"]["complete"] or report["classification"]["l_substituted"]:
        code = EXIT_INCONCLUSIVE
    elif report["classification"]["verdict"] == Verdict.INVALID.value:
        code = EXIT_INVALID
    else:
        code = EXIT_OK
    logger.info(f"[{config.name}] wrote {report_path} (exit {code})")
    return PipelineResult(code, report, report_path, growth_path)
