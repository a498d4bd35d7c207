import json
import subprocess
import sys

import pytest

from grouplab.cli import main
from grouplab.formats import ConfigError
from grouplab.suite import SuiteReport, emit_report, parse_inputs, run_suite, worker_count


def statuses(report, suffix=""):
    return {c.id: c.status for c in report.checks if c.id.endswith(suffix)}


def test_default_config():
    cfg = parse_inputs()
    assert cfg.groups == ["C2", "S3"]
    assert cfg.radius == 2 and cfg.n_max == 24


@pytest.mark.parametrize(
    "raw, msg",
    [
        ({"groups": ["Z9"]}, "groups\\[0\\]"),
        ({"radius": -1}, "radius"),
        ({"n_max": 0}, "n_max"),
        ({"bogus": 1}, "bogus"),
        ({"groups": [{"table": [[0, 1], [1, 2]]}]}, "\\[1\\]\\[1\\]"),
        ({"tol": 0}, "tol"),
        ({"metrics": [{"kind": "cycle", "n": 4, "label": "a"}, {"kind": "line", "n": 3, "label": "a"}]}, "duplicate"),
    ],
)
def test_config_errors(raw, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_inputs(raw)


def test_default_suite_passes():
    report = run_suite(parse_inputs(), threads=2)
    assert report.exit_code == 0
    assert set(statuses(report).values()) == {"pass"}
    ids = [c.id for c in report.checks]
    assert ids == sorted(ids)


def test_sabotaged_psi_fails_with_relation_witness():
    report = run_suite(parse_inputs(sabotage_psi=True), threads=1)
    assert report.exit_code == 1
    rel = next(c for c in report.checks if c.id == "S3.a1.relations")
    assert rel.status == "fail"
    first = rel.witness["first"]
    assert {"letter", "f", "k", "word", "reduced"} <= set(first)


def test_radius_zero_leaves_conjugacy_unknown():
    report = run_suite(parse_inputs({"groups": ["S3"], "metrics": [], "radius": 0}), threads=1)
    assert statuses(report, "a1.conjugacy") == {"S3.a1.conjugacy": "unknown"}
    assert report.exit_code == 0


def test_cap_exceeded_is_unknown_not_fail():
    cfg = parse_inputs({"groups": ["S3", {"name": "S5", "degree": 5, "generators": [[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]]}],
                        "metrics": [], "cap_order": 30})
    report = run_suite(cfg, threads=1)
    s5 = [c for c in report.checks if c.id.startswith("S5.")]
    assert s5 and all(c.status == "unknown" and c.cap == 30 for c in s5)
    assert statuses(report, "S3.a1.relations") == {"S3.a1.relations": "unknown"}
    assert report.exit_code == 0


def test_failed_metric_expectation_is_reported():
    cfg = parse_inputs({"groups": [], "metrics": [{"label": "c", "kind": "cycle", "n": 4, "expect": {"four_point": True}}]})
    report = run_suite(cfg, threads=1)
    (rec,) = report.checks
    assert rec.status == "fail" and rec.witness["mismatch"] == ["four_point"]


def test_empty_report_and_idempotent_emit(tmp_path):
    assert emit_report(SuiteReport(), tmp_path / "e.json") == '{\n  "checks": []\n}\n'
    report = run_suite(parse_inputs({"groups": ["C2"]}), threads=1)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    emit_report(report, a)
    emit_report(report, b)
    assert a.read_bytes() == b.read_bytes()


def test_thread_count_does_not_change_report(tmp_path):
    cfg = parse_inputs({"groups": ["S3"]})
    one = emit_report(run_suite(cfg, threads=1), tmp_path / "1.json")
    many = emit_report(run_suite(cfg, threads=4), tmp_path / "4.json")
    assert one == many


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("GROUPLAB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("GROUPLAB_THREADS", "zero")
    with pytest.raises(ConfigError):
        worker_count()


# -- command line ------------------------------------------------------------------


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_group_info(capsys):
    code, out, _ = run_cli(["group", "info", "--group", "A4"], capsys)
    assert code == 0
    assert json.loads(out)["class_sizes"] == [1, 4, 3, 4]


def test_cli_ring_trace(tmp_path, capsys):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"entries": [[[[0, 1, 2], [1, 1, 2]]]]}))
    code, out, _ = run_cli(["ring", "trace", "--group", "C2", "--matrix", str(m)], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["kaplansky"] == "1/2" and rep["augmentation"] == "1" and rep["bass_support"] is True


def test_cli_hnn_a1(capsys):
    code, out, _ = run_cli(["hnn", "a1", "--group", "S3", "--radius", "1", "--verify", "binate", "--verify", "torsion"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert len(rep["letters"]) == 5
    assert [c["name"] for c in rep["checks"]] == ["binate", "torsion"]
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_cli_rep_commands(tmp_path, capsys):
    code, out, _ = run_cli(["rep", "kappa", "--group", "S3", "--char", "triv"], capsys)
    assert code == 0 and json.loads(out)["kappa"] == "1/6"
    action = tmp_path / "act.json"
    action.write_text(json.dumps({"degree": 3, "generators": {"1": [1, 0, 2], "2": [1, 2, 0]}}))
    code, out, _ = run_cli(["rep", "artin", "--group", "S3", "--char", f"perm:{action}"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["verified"] is True
    code, _, err = run_cli(["rep", "artin", "--group", "S3", "--char", "bogus"], capsys)
    assert code == 2 and "bogus" in err


def test_cli_metric_bolic(tmp_path, capsys):
    space = tmp_path / "s.json"
    space.write_text(json.dumps({"kind": "cycle", "n": 4}))
    code, out, _ = run_cli(["metric", "bolic", "--space", str(space), "--delta", "0", "--r", "4"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["four_point"]["passed"] is False
    assert rep["b1"]["R_min"] == "2"


def test_cli_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"groups": ["S3",]}')
    code, _, err = run_cli(["suite", "--config", str(cfg)], capsys)
    assert code == 2 and "line 1" in err


def test_cli_suite_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run_cli(["suite", "--out", str(out)], capsys)
    assert code == 0
    assert json.loads(out.read_text())["summary"]["fail"] == 0
    code, _, _ = run_cli(["suite", "--out", str(out), "--sabotage-psi"], capsys)
    assert code == 1


def test_console_script_runs(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "grouplab.cli", "suite", "--radius", "1", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["config"]["radius"] == 1
