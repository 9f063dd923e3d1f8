"""Command-line interface: plumbing, exit codes, determinism."""

import json

import pytest

from tranchelab import cli, symbolic


def run(argv):
    return cli.main(argv)


def test_build_warsaw_writes_labeled_json(tmp_path):
    out = tmp_path / "w.json"
    assert run(["build", "warsaw", "--samples", "500", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["label"] == "warsaw"
    assert data["tranches"] == 1
    assert data["dim"] == 2 and len(data["points"]) > 400


def test_build_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(["build", "Xhat", "--dim", "4", "--samples", "200", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_build_unknown_space_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["build", "nosuch"])
    assert exc.value.code == 2


def test_hausdorff_of_identical_files(tmp_path, capsys):
    out = tmp_path / "c.json"
    run(["build", "X", "--dim", "3", "--samples", "150", "--out", str(out)])
    assert run(["hausdorff", str(out), str(out)]) == 0
    assert capsys.readouterr().out.strip() == "0.0"


def test_verify_metric_report(tmp_path):
    out = tmp_path / "report.json"
    assert run(["verify", "metric", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["suite"] == "metric" and report["passed"]
    assert all(c["passed"] for c in report["checks"])


def test_verify_unknown_suite_usage_error():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "nosuch"])
    assert exc.value.code == 2


def test_verify_seed_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        p = tmp_path / name
        run(["verify", "metric", "--seed", "7", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_figure_warsaw_csv(tmp_path):
    assert run(["figure", "warsaw", "--outdir", str(tmp_path)]) == 0
    text = (tmp_path / "warsaw.csv").read_text()
    assert text.splitlines()[0] == "x0,x1,q,tag"


def test_figure_a_projections_three_files(tmp_path):
    assert run(["figure", "A-projections", "--samples", "500", "--outdir", str(tmp_path)]) == 0
    for n in range(3):
        head = (tmp_path / f"A_{n}.csv").read_text().splitlines()[0]
        assert head == "x0,x1,x2,tag"


def test_figure_deterministic(tmp_path):
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    for d in (d1, d2):
        run(["figure", "X2-projection", "--samples", "400", "--outdir", str(d)])
    assert (d1 / "X_2.csv").read_bytes() == (d2 / "X_2.csv").read_bytes()


def test_config_file_defaults_and_flag_override(tmp_path):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("# defaults\nsamples = 150\ndim = 3\n")
    out1 = tmp_path / "c1.json"
    run(["--config", str(cfg), "build", "X", "--out", str(out1)])
    assert json.loads(out1.read_text())["dim"] == 3
    out2 = tmp_path / "c2.json"
    run(["--config", str(cfg), "build", "X", "--dim", "2", "--out", str(out2)])
    assert json.loads(out2.read_text())["dim"] == 2


def test_config_bad_key_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mystery = 4\n")
    with pytest.raises(SystemExit) as exc:
        run(["--config", str(cfg), "build", "warsaw"])
    assert exc.value.code == 2


def test_spec_validate_ok_and_fail(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(symbolic.chain_spec(2).to_json()))
    assert run(["spec", "validate", str(good)]) == 0

    bad_spec = {
        "graph": {"V": ["u", "v"], "E": [["u", "v"]]},
        "arcs": [{"id": "L", "attach": "ghost", "limitEdges": [0]}],
    }
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(bad_spec))
    assert run(["spec", "validate", str(bad)]) == 1


def test_spec_quotient_and_depth(tmp_path, capsys):
    f = tmp_path / "chain.json"
    f.write_text(json.dumps(symbolic.chain_spec(2).to_json()))
    assert run(["spec", "quotient", str(f)]) == 0
    q = json.loads(capsys.readouterr().out)
    assert q["betti1"] == 2
    assert run(["spec", "depth", str(f)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["depth"] == 2


def test_spec_reduce_lists_removals(tmp_path, capsys):
    f = tmp_path / "chain.json"
    f.write_text(json.dumps(symbolic.chain_spec(3).to_json()))
    assert run(["spec", "reduce", str(f)]) == 0
    r = json.loads(capsys.readouterr().out)
    assert [x["arc"] for x in r["removals"]] == ["L3", "L2", "L1"]
    assert r["final"]["arcs"] == []


def test_missing_file_reports_error(capsys):
    assert run(["hausdorff", "/nonexistent/a.json", "/nonexistent/b.json"]) == 2
    assert "error:" in capsys.readouterr().err
