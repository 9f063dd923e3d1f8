"""Verification-suite reports: registry and report shape."""

from tranchelab import verify


def test_all_suites_registered():
    assert set(verify.SUITES) == {
        "metric",
        "mahavier",
        "depth",
        "gallery",
        "decomposition",
        "symbolic",
        "dynamics",
    }


def test_symbolic_suite_report_shape():
    r = verify.verify_symbolic()
    assert r["suite"] == "symbolic" and r["passed"]
    for c in r["checks"]:
        assert {"name", "value", "bound", "op", "passed"} <= set(c)


def test_decomposition_suite_passes():
    r = verify.verify_decomposition()
    assert r["passed"]
    names = {c["name"] for c in r["checks"]}
    assert {"gap-law-levels-1-5", "level2-base-detection"} <= names
