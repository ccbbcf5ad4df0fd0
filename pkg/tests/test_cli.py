import json
import os

import pytest

from superbv import cli
from superbv.cli import RunConfig, build_parser, main

DATA = os.path.join(os.path.dirname(__file__), "data", "v1")


def run(args, tmp_path):
    out = str(tmp_path / "report.json")
    code = main(args + ["--format", "json", "--out", out])
    with open(out) as handle:
        return code, json.load(handle)


def checks_of(document):
    return {check["name"]: check for check in document["checks"]}


def test_verify_atlas_file(tmp_path):
    code, document = run(["verify-atlas", "--atlas", os.path.join(DATA, "conic.json")], tmp_path)
    assert code == 0
    assert document["status"] == "pass"
    assert "ber.conic.semidensity.U0-U1" in checks_of(document)


def test_corrupted_atlas_fails(tmp_path):
    code, document = run(["verify-atlas", "--atlas", os.path.join(DATA, "conic_corrupted.json")], tmp_path)
    assert code == 1
    assert document["status"] == "fail"
    failed = [check for check in document["checks"] if check["status"] == "fail"]
    assert failed and all(check["residual"] for check in failed)


def test_usage_errors(tmp_path, capsys):
    assert main(["verify-atlas", "--atlas", os.path.join(DATA, "missing.json")]) == 2
    assert main(["verify-atlas"]) == 2
    assert main(["bv-check"]) == 2
    assert main(["bv-check", "--dims", "1", "1", "--format", "yaml"]) == 2
    assert main(["bv-check", "--dims", "1", "1", "--trials", "0"]) == 2
    assert main(["tangent"]) == 2
    assert "superbv: error" in capsys.readouterr().err


def test_bv_check_is_deterministic(tmp_path):
    args = ["bv-check", "--dims", "1", "1", "--xmax", "2", "--pmax", "2", "--trials", "5", "--seed", "3"]
    first_code, first = run(args, tmp_path)
    second_code, second = run(args, tmp_path)
    assert first_code == second_code == 0
    strip = [{key: value for key, value in check.items() if key != "elapsed"} for check in first["checks"]]
    assert strip == [{key: value for key, value in check.items() if key != "elapsed"} for check in second["checks"]]
    assert first["config"]["seed"] == 3


def test_atiyah_of_projective_line(tmp_path):
    code, document = run(["atiyah", "--example", "cp", "--dims", "1", "0"], tmp_path)
    assert code == 0
    data = checks_of(document)["atiyah.cp1|0.class"]["data"]
    assert data["split"] is False
    assert data["chern_degree"] == "2"


def test_ext_of_affine_space(tmp_path):
    code, document = run(["ext", "--example", "affine", "--dims", "2", "2"], tmp_path)
    assert code == 0
    assert checks_of(document)["ext.affine2|2.verdict"]["data"]["split"] is True


def test_non_unit_chart_map_exits_with_failure(tmp_path):
    code, document = run(["verify-atlas", "--atlas", os.path.join(DATA, "shifted_chart.json")], tmp_path)
    assert code == 1
    checks = checks_of(document)
    assert checks["atlas.shifted.units.U0-U1"]["status"] == "fail"
    assert checks["atlas.shifted.inverse.U0-U1"]["residual"]


def test_unexpected_ext_verdict_fails(tmp_path, monkeypatch):
    monkeypatch.setitem(cli.EXPECTED_SPLIT, "affine", False)
    code, document = run(["ext", "--example", "affine", "--dims", "2", "2"], tmp_path)
    assert code == 1
    verdict = checks_of(document)["ext.affine2|2.verdict"]
    assert verdict["status"] == "fail"
    assert verdict["residual"] == "affine is expected to be non-split"


def test_unexpected_atiyah_verdict_fails(tmp_path, monkeypatch):
    monkeypatch.setitem(cli.EXPECTED_SPLIT, "cp", True)
    code, document = run(["atiyah", "--example", "cp", "--dims", "1", "0"], tmp_path)
    assert code == 1
    assert checks_of(document)["atiyah.cp1|0.class"]["status"] == "fail"


def test_atlas_files_have_no_expected_verdict(tmp_path, monkeypatch):
    monkeypatch.setitem(cli.EXPECTED_SPLIT, "conic", True)
    code, document = run(["ext", "--atlas", os.path.join(DATA, "conic.json")], tmp_path)
    assert code == 0
    assert checks_of(document)["ext.conic.verdict"]["data"]["split"] is False


def test_projected_line_components(tmp_path):
    code, document = run(["atiyah", "--example", "cp", "--dims", "1", "2"], tmp_path)
    assert code == 0
    dw = checks_of(document)["atiyah.cp1|2.dw"]
    assert dw["status"] == "pass"
    assert "red" in dw["data"]["nonzero"] and "omega" not in dw["data"]["nonzero"]


def test_conic_demo(tmp_path):
    code, document = run(["conic-demo"], tmp_path)
    assert code == 0
    checks = checks_of(document)
    assert checks["conic.classification"]["data"]["structure"] == "non-projected"
    assert set(checks["conic.dw"]["data"]["components"]) == {"red", "omega", "ferm"}


def test_text_report_to_stdout(capsys):
    assert main(["verify-atlas", "--example", "cp", "--dims", "1", "1"]) == 0
    assert capsys.readouterr().out.startswith("superbv ")


def test_parser_defaults():
    namespace = build_parser().parse_args(["bv-check", "--dims", "1", "2"])
    config = RunConfig.from_namespace(namespace)
    assert config.dims == (1, 2)
    assert (config.p_max, config.x_max, config.seed, config.trials) == (4, 4, 0, 200)
    assert config.derive(seed=5).seed == 5


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("bv-check", trials=0)
    with pytest.raises(ValueError):
        RunConfig("bv-check", p_max=0)
