"""Command-line interface: exit codes, output, report and log export."""

import json

import pytest

from consentgate.cli import main
from consentgate.harness import trace_to_lines
from consentgate.scenarios import builtin_scenario


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_builtin_rat_1080(capsys):
    code, out, _ = run_cli(capsys, "run", "--builtin", "RAT_1080", "--no-report")
    assert code == 0
    assert "blocked=1080 granted=0" in out
    assert "expectation: PASS" in out


def test_run_builtin_t1_writes_report(capsys, tmp_path):
    report_path = tmp_path / "t1.report.json"
    code, out, _ = run_cli(capsys, "run", "--builtin", "T1",
                           "--report", str(report_path))
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["summary"]["granted"] == 1


def test_run_missing_trace_exits_2(capsys):
    code, _, err = run_cli(capsys, "run", "no-such-file.trace")
    assert code == 2
    assert "error" in err


def test_run_malformed_trace_exits_2(capsys, tmp_path):
    p = tmp_path / "bad.trace"
    p.write_text('{"seq": 1, "t_ms": 0, "kind": "Nope", "payload": {}}\n')
    code, _, err = run_cli(capsys, "run", str(p))
    assert code == 2
    assert "unknown kind" in err


def test_run_unknown_builtin_exits_2(capsys):
    code, _, err = run_cli(capsys, "run", "--builtin", "T99")
    assert code == 2
    assert "unknown scenario" in err


def test_run_requires_exactly_one_source(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "x.trace", "--builtin", "T1"])
    assert exc.value.code == 2


def test_run_trace_file_matches_builtin(capsys, tmp_path):
    p = tmp_path / "t2.trace"
    p.write_text("\n".join(trace_to_lines(builtin_scenario("T2"))) + "\n")
    code, out, _ = run_cli(capsys, "run", str(p), "--no-report")
    assert code == 0
    assert "granted=1" in out


def test_run_writes_default_report_file(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run_cli(capsys, "run", "--builtin", "T1")
    assert code == 0
    report = json.loads((tmp_path / "T1.report.json").read_text())
    assert report["summary"]["granted"] == 1


def test_list_names_builtins_and_worlds(capsys):
    code, out, _ = run_cli(capsys, "list")
    assert code == 0
    assert "RAT_1080" in out
    assert "A5_hijack_screenshot" in out
    assert "interactive" in out


def test_bench_small_n(capsys):
    code, out, _ = run_cli(capsys, "bench", "--n", "5")
    assert code == 0
    for device in ("FrontCamera", "BackCamera", "Microphone", "Screen"):
        assert device in out
    assert "overhead" in out


def test_export_log_from_report(capsys, tmp_path):
    report_path = tmp_path / "a1.report.json"
    code, _, _ = run_cli(capsys, "run", "--builtin", "A1_stealthy_photo",
                         "--report", str(report_path))
    assert code == 0
    out_path = tmp_path / "log.txt"
    code, _, _ = run_cli(capsys, "export-log", str(report_path),
                         "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert len(lines) == 1
    seq, iso, category, app, op, device, detail = lines[0].split("|")
    assert (seq, category, op) == ("1", "Blocked", "TakePhoto")
    assert iso.startswith("1970-01-01T00:00:01")


def test_export_log_to_stdout(capsys, tmp_path):
    report_path = tmp_path / "t1.report.json"
    run_cli(capsys, "run", "--builtin", "T1", "--report", str(report_path))
    code, out, _ = run_cli(capsys, "export-log", str(report_path))
    assert code == 0
    assert "Authorized|cam.photoshare|TakePhoto|FrontCamera" in out


def test_config_flags_change_behavior(capsys, tmp_path):
    # with a tiny pending timeout the consent window closes before the
    # request arrives, so T1's request is blocked instead of granted
    code, out, _ = run_cli(capsys, "run", "--builtin", "T1", "--no-report",
                           "--pending-timeout-ms", "100", "--grace-ms", "50")
    assert code == 1
    assert "expectation: FAIL" in out
