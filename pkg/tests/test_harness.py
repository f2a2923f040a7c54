"""Trace parsing, validation errors, determinism, virtual clock."""

import json

import pytest

from consentgate.clock import VirtualClock
from consentgate.errors import MalformedTraceError
from consentgate.harness import (
    load_trace,
    parse_trace_lines,
    run_trace,
    trace_to_lines,
)
from consentgate.scenarios import builtin_scenario
from consentgate.verify import reports_equal_masked

from conftest import random_trace


def line(seq, t_ms, kind, **payload):
    return json.dumps({"seq": seq, "t_ms": t_ms, "kind": kind, "payload": payload})


def test_empty_trace_empty_report():
    report = run_trace([])
    assert report["summary"]["requests"] == 0
    assert report["decisions"] == []
    assert report["log"] == []
    assert report["timeline"] == []


def test_parse_roundtrip():
    events = builtin_scenario("T1")
    again = parse_trace_lines(trace_to_lines(events))
    assert [e.as_dict() for e in again] == [e.as_dict() for e in events]


def test_load_trace_from_file(tmp_path):
    p = tmp_path / "t1.trace"
    p.write_text("\n".join(trace_to_lines(builtin_scenario("T1"))) + "\n")
    report = run_trace(load_trace(str(p)))
    assert report["summary"]["granted"] == 1


@pytest.mark.parametrize(
    "lines,fragment",
    [
        (["not json"], "invalid JSON"),
        (['["a"]'], "JSON object"),
        ([line(1, 0, "Noop")], "unknown kind"),
        ([json.dumps({"seq": 1, "t_ms": 0, "kind": "AppRelease",
                      "payload": {"app_id": "x"}, "extra": 1})], "unknown fields"),
        ([json.dumps({"seq": 1, "kind": "AppRelease",
                      "payload": {"app_id": "x"}})], "missing fields"),
        ([line(1, 0, "AppRelease", app_id="x", bogus=True)],
         "unknown payload fields"),
        ([line(1, 0, "AppRelease")], "missing payload fields"),
        ([line(1, -5, "AppRelease", app_id="x")], "non-negative"),
        ([line(1, 0, "AppRelease", app_id="x"),
          line(1, 10, "AppRelease", app_id="x")], "duplicate seq"),
        ([line(2, 10, "AppRelease", app_id="x"),
          line(1, 10, "AppRelease", app_id="x")], "not ordered"),
        ([line(1, 10, "AppRelease", app_id="x"),
          line(2, 5, "AppRelease", app_id="x")], "not ordered"),
        ([line(1, 0, "AppRequest", app_id="x", op="RecordAudio",
               device="FrontCamera")], "cannot serve"),
        ([line(1, 0, "Gesture", gesture="Wave")], "bad gesture"),
        ([line(1, 0, "FaultInject", fault="Meteor")], "bad fault"),
        ([line(1, 0, "InstallApp", app_id="x", display_name="X",
               permissions=["NOT_A_PERM"], buttons=[])], "bad permission"),
        ([line(1, 0, "InstallApp", app_id="x", display_name="X",
               permissions=[], buttons=[{"button_id": "b"}])], "bad button"),
    ],
)
def test_malformed_traces_rejected(lines, fragment):
    with pytest.raises(MalformedTraceError) as exc:
        parse_trace_lines(lines)
    assert fragment in str(exc.value)


def test_malformed_error_carries_line_number():
    lines = [line(1, 0, "AppRelease", app_id="x"), "garbage"]
    with pytest.raises(MalformedTraceError) as exc:
        parse_trace_lines(lines)
    assert exc.value.line == 2


def test_blank_lines_are_skipped():
    lines = ["", line(1, 0, "AppRelease", app_id="x"), "   "]
    parsed = parse_trace_lines(lines)
    assert len(parsed) == 1


def test_unresolvable_reference_is_malformed():
    events = parse_trace_lines([line(1, 0, "SetForeground", app_id="ghost")])
    with pytest.raises(MalformedTraceError):
        run_trace(events)


def test_replay_determinism_random_traces(rng):
    for _ in range(25):
        events = random_trace(rng)
        a = run_trace(events)
        b = run_trace(events)
        assert reports_equal_masked(a, b)


def test_virtual_clock_monotone():
    clock = VirtualClock()
    clock.advance_to(5)
    clock.advance_to(5)
    assert clock.now_ms == 5
    with pytest.raises(ValueError):
        clock.advance_to(4)
