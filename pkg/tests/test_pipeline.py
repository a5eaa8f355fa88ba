import json

import pandas as pd
import pytest

import isogroups
from run_fixtures import run_all
from src.config.paths import CONFIG_DIR
from src.core.errors import ConfigError, DimensionMismatchError, LatticeError
from src.groups import enumeration
from src.growth.profile import GROWTH_COLUMNS
from src.obstruct import pipeline
from src.obstruct.config_loader import load_config, parse_config
from src.obstruct.pipeline import EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_PARSE, run_pipeline

EXPECTED = {
    "screw": ("Unknown", 1, 0),
    "screw_r4": ("InfiniteMultiplicityThm13", 1, 0),
    "z2": ("NoObstructionClaimed", 2, 2),
    "z2_conformal": ("NoObstructionClaimed", 2, 2),
    "z2_in_r5": ("InfiniteMultiplicityThm12", 2, 2),
    "glide": ("NoObstructionClaimed", 1, 1),
}


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return path


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_bundled_configs(tmp_path, name):
    result = run_pipeline(CONFIG_DIR / f"{name}.json", tmp_path)
    assert result.exit_code == EXIT_OK, result.report.get("error")
    verdict, k, l = EXPECTED[name]
    cls = result.report["classification"]
    assert (cls["verdict"], cls["k"], cls["l"]) == (verdict, k, l)
    assert not cls["l_substituted"]

    saved = json.loads(result.report_path.read_text(encoding="utf-8"))
    assert saved["classification"]["verdict"] == verdict
    growth = pd.read_csv(result.growth_path)
    assert list(growth.columns) == GROWTH_COLUMNS
    assert list(growth["r"]) == [8, 16, 32, 64]


def test_screw_report_sections(tmp_path):
    report = run_pipeline(CONFIG_DIR / "screw.json", tmp_path).report
    assert report["conjugation"]["verdict"]["status"] == "Fails"
    assert report["conjugation"]["theorem"]["status"] == "NotApplicable"
    assert "index" not in report["conjugation"]
    assert report["pair"]["invariant_translation"]
    assert report["selection"]["status"] == "avoiding"
    assert report["selection"]["C_emp"] > 0
    assert not report["classification"]["lattes_incompatible"]


def test_z2_conformal_report_sections(tmp_path):
    report = run_pipeline(CONFIG_DIR / "z2_conformal.json", tmp_path).report
    section = report["conjugation"]
    assert section["verdict"]["status"] == "Subset"
    assert section["index"] == {"index": 4, "certified": True}
    assert section["theorem"]["status"] == "Verified"
    assert section["linearization"]["status"] == "Linearized"
    assert section["linearization"]["m"] == 0
    assert report["selection"]["status"] == "skipped"


def test_glide_report_sections(tmp_path):
    report = run_pipeline(CONFIG_DIR / "glide.json", tmp_path).report
    assert report["conjugation"]["index"]["index"] == 3
    assert report["selection"]["status"] == "single_block"
    assert report["pair"]["lattice_rank"] == 1


def test_screw_r4_selects_orthogonal_lines(tmp_path):
    report = run_pipeline(CONFIG_DIR / "screw_r4.json", tmp_path).report
    selection = report["selection"]
    assert selection["status"] == "orthogonal"
    assert selection["block_dims"] == [1, 2]
    assert selection["L1"] == pytest.approx([0.0, 0.0, 1.0, 0.0], abs=1e-9)
    assert selection["L2"] == pytest.approx([1.0, 0.0, 0.0, 0.0], abs=1e-9)


def test_malformed_json_exits_4(tmp_path):
    result = run_pipeline(write_config(tmp_path, "{not json"), tmp_path / "out")
    assert result.exit_code == EXIT_PARSE
    assert "Malformed" in result.report["error"]


def test_missing_file_exits_4(tmp_path):
    assert run_pipeline(tmp_path / "nope.json").exit_code == EXIT_PARSE


def test_dimension_mismatch_exits_2(tmp_path):
    path = write_config(tmp_path, {"dim": 3, "generators": [{"ort": [[1, 0], [0, 1]], "tran": [1, 0]}]})
    assert run_pipeline(path, tmp_path / "out").exit_code == EXIT_INVALID


def test_non_orthogonal_generator_exits_4(tmp_path):
    path = write_config(tmp_path, {"dim": 2, "generators": [{"ort": [[2, 0], [0, 1]], "tran": [1, 0]}]})
    assert run_pipeline(path, tmp_path / "out").exit_code == EXIT_PARSE


def test_incomplete_ball_exits_3(tmp_path, monkeypatch):
    real = enumeration.enumerate_ball
    monkeypatch.setattr(pipeline, "enumerate_ball",
                        lambda spec, r, **kw: real(spec, r, max_elements=50, **kw))
    result = run_pipeline(CONFIG_DIR / "z2.json", tmp_path)
    assert result.exit_code == EXIT_INCONCLUSIVE
    assert not result.report["ball"]["complete"]
    assert result.report_path.exists()


def test_unknown_translation_rank_exits_3(tmp_path, monkeypatch):
    def broken(translations, tol):
        raise LatticeError("translations do not form a lattice")

    monkeypatch.setattr(pipeline, "lattice_basis", broken)
    result = run_pipeline(CONFIG_DIR / "z2.json", tmp_path)
    assert result.exit_code == EXIT_INCONCLUSIVE
    assert result.report["translation_rank"] is None
    cls = result.report["classification"]
    assert cls["l_substituted"]
    assert cls["l"] == 0


def test_parse_config_variants():
    base = {"dim": 2, "generators": [{"ort": [[1, 0], [0, 1]], "tran": [1, 0]}]}
    config = parse_config(dict(base, conformal={"scale": 2}), name="plain")
    assert config.name == "plain"
    assert config.conformal.scale == 2.0
    assert config.radii == [8.0, 16.0, 32.0, 64.0]
    pair = {"subgroup_generators": [{"ort": [[1, 0], [0, 1]], "tran": [2, 0]}],
            "V": {"base": [0, 3], "basis": [[2, 0]]}}
    config = parse_config(dict(base, pair=pair))
    assert config.pair.V.dim == 1
    assert config.pair.V.distance([0.0, 0.0]) == pytest.approx(3.0)


@pytest.mark.parametrize("raw, error", [
    ([], ConfigError),
    ({"generators": []}, ConfigError),
    ({"dim": 2, "generators": []}, ConfigError),
    ({"dim": 2, "generators": [{"ort": [[1, 0], [0, 1]]}]}, ConfigError),
    ({"dim": 2, "generators": [{"ort": [[1, 0], [0, 1]], "tran": [1, 0]}], "tol": -1}, ConfigError),
    ({"dim": 2, "generators": [{"ort": [[1, 0], [0, 1]], "tran": [1, 0]}],
      "conformal": {"scale": 2, "rot": [[1, 0], [0, -1]]}}, ConfigError),
    ({"dim": 2, "generators": [{"ort": [[1, 0], [0, 1]], "tran": [1, 0]}],
      "pair": {"subgroup_indices": [3], "V": {"base": [0, 0]}}}, ConfigError),
    ({"dim": 2, "generators": [{"ort": [[1, 0], [0, 1]], "tran": [1, 0]}],
      "pair": {"subgroup_indices": [0], "V": {"base": [0, 0, 0]}}}, DimensionMismatchError),
])
def test_parse_config_errors(raw, error):
    with pytest.raises(error):
        parse_config(raw)


def test_load_config_uses_file_stem(tmp_path):
    path = write_config(tmp_path, {"dim": 1, "generators": [{"ort": [[1]], "tran": [1]}]}, "line.json")
    assert load_config(path).name == "line"


def test_cli_classify(capsys):
    assert isogroups.main(["classify", "--n", "5", "--k", "2", "--l", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["verdict"] == "InfiniteMultiplicityThm12"
    assert isogroups.main(["classify", "--n", "5", "--k", "2", "--l", "3"]) == EXIT_INVALID


def test_cli_analyze(tmp_path, capsys):
    code = isogroups.main(["analyze", str(CONFIG_DIR / "screw_r4.json"), "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert "InfiniteMultiplicityThm13" in capsys.readouterr().out
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "growth.csv").exists()


def test_cli_growth(tmp_path, capsys):
    out = tmp_path / "z2.csv"
    code = isogroups.main(["growth", str(CONFIG_DIR / "z2.json"), "--radii", "4,8,16,32", "--out", str(out)])
    assert code == EXIT_OK
    assert "k_hat = 2" in capsys.readouterr().out
    assert list(pd.read_csv(out)["N"]) == [49, 197, 797, 3209]


def test_cli_conjugation(capsys):
    assert isogroups.main(["conjugation", str(CONFIG_DIR / "z2_conformal.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Subset" in out
    assert "= 4 (certified)" in out


def test_cli_select_lines(capsys):
    assert isogroups.main(["select-lines", str(CONFIG_DIR / "screw_r4.json")]) == EXIT_OK
    assert "dimensions [1, 2]" in capsys.readouterr().out


def test_cli_config_errors(tmp_path):
    assert isogroups.main(["conjugation", str(CONFIG_DIR / "z2.json")]) == EXIT_PARSE
    assert isogroups.main(["select-lines", str(CONFIG_DIR / "z2.json")]) == EXIT_PARSE
    bad = write_config(tmp_path, "[1, 2")
    assert isogroups.main(["growth", str(bad)]) == EXIT_PARSE


def test_run_all_bundled(tmp_path, capsys):
    assert run_all(CONFIG_DIR, tmp_path) == 0
    out = capsys.readouterr().out
    assert "FIXTURE ANALYSIS COMPLETE" in out
    assert len(list(tmp_path.glob("*/report.json"))) == len(EXPECTED)
