import json

import pytest

import superbv


def test_duplicate_names_are_rejected():
    report = superbv.Report("verify-atlas", {"seed": 0})
    report.add(superbv.CheckResult("atlas.a.charts", True))
    with pytest.raises(ValueError):
        report.add(superbv.CheckResult("atlas.a.charts", False))


def test_verdict_and_order():
    report = superbv.Report("verify-atlas", version="0.0.0")
    report.extend([superbv.CheckResult("b", True), superbv.CheckResult("a", True, residual="")])
    assert report.passed
    assert [check.name for check in report.checks] == ["a", "b"]
    report.add(superbv.CheckResult("c", False, "x = 0", "z - 1"))
    assert not report.passed
    assert "c" in report and report["c"].residual == "z - 1"


def test_json_document():
    report = superbv.Report("bv-check", {"dims": [1, 1]}, version="0.0.0")
    report.add(superbv.CheckResult("bv.1|1.d_squared", True, "d^2 = 0", data={"trials": 3}))
    document = json.loads(report.to_json())
    assert document["tool"] == "superbv"
    assert document["status"] == "pass"
    assert document["config"] == {"dims": [1, 1]}
    assert document["checks"][0]["status"] == "pass"
    assert document["checks"][0]["data"] == {"trials": 3}


def test_text_lists_every_check():
    report = superbv.Report("ext", version="0.0.0")
    report.add(superbv.CheckResult("ext.conic.verdict", True, data={"split": False}))
    text = report.to_text()
    assert text.splitlines()[0] == "superbv 0.0.0 ext: PASS"
    assert "ext.conic.verdict" in text


def test_timed_stamps_elapsed_time():
    results = superbv.timed(superbv.verify_atlas, superbv.build_projective(1, 0))
    assert all(result.elapsed >= 0 for result in results)
    single = superbv.timed(lambda: superbv.CheckResult("x", True))
    assert single.name == "x"
