"""
isogroups command line
Analyze discrete groups of Euclidean isometries described by JSON configs.

    python isogroups.py classify --n 5 --k 2 --l 2
    python isogroups.py analyze data_storage/configs/screw.json --out reports/screw
    python isogroups.py conjugation data_storage/configs/z2_conformal.json
    python isogroups.py select-lines data_storage/configs/screw_r4.json
    python isogroups.py growth data_storage/configs/z2.json --radii 8,16,32,64
"""

import argparse
import json
import sys

from loguru import logger

from src.config.settings import DEFAULT_RADII, LOG_LEVEL
from src.conjugate.conformal_analysis import (
    check_conjugation_invariance,
    conjugation_index,
    verify_translation_dim_theorem,
)
from src.core.errors import ConfigError, IsogroupsError
from src.geometry.selection import (
    restrict_orthogonal,
    select_orthogonal_halflines,
    simultaneous_block_diagonalize,
)
from src.groups.enumeration import enumerate_ball
from src.growth.profile import estimate_dimension, growth_profile
from src.obstruct.classifier import Verdict, classify
from src.obstruct.config_loader import load_config
from src.obstruct.pipeline import EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_PARSE, run_pipeline


def _configure_logging(verbose: bool):
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else LOG_LEVEL)


def _parse_radii(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"radii must be comma separated numbers, got {text!r}")


def cmd_classify(args) -> int:
    report = classify(args.n, args.k, args.l, lattes_expanding=args.lattes_expanding)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_INVALID if report.verdict is Verdict.INVALID else EXIT_OK


def cmd_analyze(args) -> int:
    result = run_pipeline(args.config, args.out)
    if result.report_path is not None:
        cls = result.report["classification"]
        print("=" * 80)
        print(f"ANALYSIS: {result.report['name']}")
        print("=" * 80)
        print(f"  n = {cls['n']}, k_hat = {cls['k']}, dim Gamma_T = {cls['l']}")
        print(f"  verdict: {cls['verdict']}")
        print(f"  report: {result.report_path}")
        print(f"  growth: {result.growth_path}")
    else:
        print(f"✗ {result.report.get('error', 'analysis failed')}")
    return result.exit_code


def cmd_conjugation(args) -> int:
    config = load_config(args.config)
    if config.conformal is None:
        raise ConfigError("config has no 'conformal' entry")
    A, spec = config.conformal, config.spec
    verdict = check_conjugation_invariance(A, spec, tol=config.tol)
    print(f"A Gamma A^-1 vs Gamma: {verdict.status.value} (radius {verdict.checked_radius:g})")
    if verdict.witness is not None:
        print(f"  witness: {verdict.witness}")
    if verdict.holds:
        idx = conjugation_index(A, spec, args.radius, tol=config.tol)
        print(f"  index [Gamma : A Gamma A^-1] = {idx.index} ({'certified' if idx.certified else 'uncertified'})")
    if A.is_expanding:
        theorem = verify_translation_dim_theorem(spec, A, config.radii, config.tol)
        print(f"  dim Gamma_T = dim Gamma: {theorem.status.value} "
              f"(k_hat={theorem.k_hat}, translation rank={theorem.translation_rank})")
    return EXIT_INCONCLUSIVE if verdict.status.value == "Inconclusive" else EXIT_OK


def cmd_select_lines(args) -> int:
    config = load_config(args.config)
    if config.pair is None:
        raise ConfigError("config has no 'pair' entry")
    V = config.pair.V
    ball = enumerate_ball(config.pair.subgroup_spec(), args.radius, tol=config.tol)
    decomp = simultaneous_block_diagonalize(restrict_orthogonal(ball, V, config.tol), config.tol)
    frame = V.complement_basis()
    print(f"Invariant blocks of V^perp: dimensions {decomp.dims}")
    L1, L2 = select_orthogonal_halflines(decomp)
    print(f"  L1 = {L1.lift(frame).direction.round(9).tolist()}")
    print(f"  L2 = {L2.lift(frame).direction.round(9).tolist()}")
    return EXIT_OK


def cmd_growth(args) -> int:
    config = load_config(args.config)
    radii = args.radii or config.radii
    ball = enumerate_ball(config.spec, max(radii), tol=config.tol)
    profile = growth_profile(ball, radii, tol=config.tol)
    print(profile.to_frame().to_string(index=False))
    if len(radii) >= 4:
        est = estimate_dimension(profile)
        print(f"\nslope {est.slope:.4f} -> k_hat = {est.k_hat} (residual {est.residual:.4f})")
    if args.out:
        print(f"\nSaved growth table to {profile.to_csv(args.out)}")
    return EXIT_OK if ball.complete else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isogroups", description=__doc__.strip().splitlines()[1])
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a triple (n, dim Gamma, dim Gamma_T)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--lattes-expanding", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("analyze", help="full analysis of a config, writes report.json and growth.csv")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("conjugation", help="conjugation invariance, index and translation theorem")
    p.add_argument("config")
    p.add_argument("--radius", type=float, default=6.0)
    p.set_defaults(func=cmd_conjugation)

    p = sub.add_parser("select-lines", help="orthogonal half-lines in V^perp")
    p.add_argument("config")
    p.add_argument("--radius", type=float, default=16.0)
    p.set_defaults(func=cmd_select_lines)

    p = sub.add_parser("growth", help="growth table of a config")
    p.add_argument("config")
    p.add_argument("--radii", type=_parse_radii, default=None,
                   help=f"comma separated radii (default from config, else {DEFAULT_RADII})")
    p.add_argument("--out", default=None, help="CSV output path")
    p.set_defaults(func=cmd_growth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"✗ Config error: {e}")
        return EXIT_PARSE
    except (IsogroupsError, ValueError) as e:
        print(f"✗ {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
