"""Report-level invariant checkers.

Each checker scans a finished simulation report and returns a list of
problem strings, empty when the property holds. The five security
properties map onto: every data delivery sits inside a granted session
(SP1), every gesture-bound grant matches its consent triple (SP2), active
sessions are always represented on the status bar (SP3), grants and
terminations are always logged (SP4), and the rotation shows every active
session within one full alternation period (SP5).
"""

from __future__ import annotations

import bisect
import json
from typing import Iterable


def mask_latencies(report: dict) -> dict:
    """Copy of the report with host-measured latency fields zeroed."""
    out = json.loads(json.dumps(report))
    for d in out["decisions"]:
        d["latency_ns"] = 0
    return out


def report_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=False)


def reports_equal_masked(a: dict, b: dict) -> bool:
    return report_json(mask_latencies(a)) == report_json(mask_latencies(b))


def _session_intervals(report: dict) -> dict[int, tuple[int, int]]:
    out = {}
    for s in report["sessions"]:
        end = s["ended_t"] if s["ended_t"] is not None else report["summary"]["end_t_ms"]
        out[s["session_id"]] = (s["started_t"], end)
    return out


def check_complete_mediation(report: dict) -> list[str]:
    problems = []
    s = report["summary"]
    if len(report["decisions"]) != s["requests"]:
        problems.append(
            f"{len(report['decisions'])} decisions for {s['requests']} requests"
        )
    engine_decisions = sum(
        1 for d in report["decisions"] if d["stage"] != "ConventionalDenied"
    )
    if engine_decisions != s["requests"] - s["conventional_denied"]:
        problems.append("engine decision count mismatch")
    seen = [d["request_id"] for d in report["decisions"]]
    if len(seen) != len(set(seen)):
        problems.append("duplicate outcomes for a request")
    if report["hooks"]:
        arrived = {
            h["request_id"] for h in report["hooks"] if h["kind"] == "RequestArrived"
        }
        granted = {
            d["request_id"] for d in report["decisions"] if d["stage"] == "Granted"
        }
        if not granted <= arrived:
            problems.append("grant without a request-arrived hook")
    return problems


def check_sp1(report: dict) -> list[str]:
    """Device data flows only inside granted sessions."""
    problems = []
    intervals = _session_intervals(report)
    granted_sessions = {
        d["session_id"] for d in report["decisions"] if d["stage"] == "Granted"
    }
    for h in report["hooks"]:
        if h["kind"] != "SensorRead":
            continue
        sid = h["session_id"]
        if sid not in granted_sessions:
            problems.append(f"read for session {sid} with no grant")
            continue
        start, end = intervals[sid]
        if not (start <= h["t_ms"] <= end):
            problems.append(
                f"read at t={h['t_ms']} outside session {sid} [{start},{end}]"
            )
    return problems


def check_sp2(report: dict) -> list[str]:
    """Granted operations match the consenting gesture's triple."""
    problems = []
    bindings = {b["binding_id"]: b for b in report["bindings"]}
    sessions = {s["session_id"]: s for s in report["sessions"]}
    for d in report["decisions"]:
        if d["stage"] != "Granted":
            continue
        s = sessions[d["session_id"]]
        if d["binding_id"] is None:
            if not s["exempt"]:
                problems.append(f"grant r{d['request_id']} without binding or exemption")
            continue
        b = bindings[d["binding_id"]]
        triple_ok = (
            b["app_id"] == d["charged_app_id"]
            and b["op"] == d["op"]
            and b["device"] == d["device"]
        )
        if not triple_ok:
            problems.append(f"grant r{d['request_id']} does not match binding triple")
        if b["consumed_by_request"] != d["request_id"]:
            problems.append(f"binding {b['binding_id']} not consumed by r{d['request_id']}")
    return problems


def _bar_segments(report: dict):
    """(t_from, t_to, bar_state, active_session_ids) half-open segments."""
    timeline = report["timeline"]
    end_t = report["summary"]["end_t_ms"]
    intervals = _session_intervals(report)
    cuts = {0, end_t}
    cuts.update(e["t_ms"] for e in timeline)
    for start, end in intervals.values():
        cuts.add(start)
        cuts.add(end)
    ordered = sorted(c for c in cuts if c <= end_t)
    entry_ts = [e["t_ms"] for e in timeline]
    out = []
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            continue
        i = bisect.bisect_right(entry_ts, a) - 1
        state = timeline[i] if i >= 0 else None
        active = {
            sid for sid, (s, e) in intervals.items() if s <= a < e
        }
        out.append((a, b, state, active))
    return out


def check_sp3(report: dict) -> list[str]:
    """With any active session the bar shows a security message, an ongoing
    one when nothing preempts it; with none, no ongoing message shows."""
    problems = []
    for a, b, state, active in _bar_segments(report):
        cur = state["current"] if state else None
        if active:
            if cur is None:
                problems.append(f"[{a},{b}) active {sorted(active)} but bar empty")
            elif cur["kind"] == "Ongoing" and cur["ref"] not in active:
                problems.append(f"[{a},{b}) bar shows terminated session {cur['ref']}")
        else:
            if cur is not None and cur["kind"] == "Ongoing":
                problems.append(f"[{a},{b}) ghost ongoing message {cur['ref']}")
    return problems


def check_sp5(report: dict) -> list[str]:
    """Round-robin fairness: within any unpreempted stretch with a constant
    set of k active sessions, every session is displayed at least once per
    window of k * alternation_interval."""
    problems = []
    interval = report["config"]["alternation_interval_ms"]
    segments = _bar_segments(report)
    # merge consecutive segments with identical active sets while the bar
    # keeps showing ongoing messages
    runs = []
    for a, b, state, active in segments:
        cur = state["current"] if state else None
        ongoing = cur is not None and cur["kind"] == "Ongoing" and active
        if not ongoing:
            runs.append(None)
            continue
        shown = cur["ref"]
        if runs and runs[-1] and runs[-1]["active"] == active and runs[-1]["to"] == a:
            runs[-1]["to"] = b
            runs[-1]["shows"].append((a, b, shown))
        else:
            runs.append({"from": a, "to": b, "active": set(active),
                         "shows": [(a, b, shown)]})
    for run in runs:
        if not run:
            continue
        k = len(run["active"])
        window = k * interval
        span = run["to"] - run["from"]
        if span < window:
            continue
        starts = [run["from"]] + [
            a for a, _, _ in run["shows"] if run["from"] < a <= run["to"] - window
        ]
        for w in starts:
            seen = {
                ref for a, b, ref in run["shows"] if a < w + window and b > w
            }
            if not run["active"] <= seen:
                missing = sorted(run["active"] - seen)
                problems.append(
                    f"window [{w},{w + window}) never displayed sessions {missing}"
                )
    return problems


def check_sp4(report: dict) -> list[str]:
    """Every grant is logged and every logged session is closed out."""
    problems = []
    s = report["summary"]
    log = s["log"]
    if log["Authorized"] != s["granted"]:
        problems.append(
            f"{s['granted']} grants but {log['Authorized']} authorized entries"
        )
    if log["Terminated"] != log["Authorized"]:
        problems.append(
            f"{log['Authorized']} authorized but {log['Terminated']} terminated entries"
        )
    return problems


def check_conservation(report: dict) -> list[str]:
    problems = []
    s = report["summary"]
    log = s["log"]
    if log["Blocked"] != s["monitor_blocked"]:
        problems.append("blocked log/decision mismatch")
    requestless_slideouts = sum(
        1
        for e in report["log"]
        if e["category"] == "Denied" and e["detail"] == "slide-out"
    )
    if log["Denied"] != s["user_denied"] + requestless_slideouts:
        problems.append("denied log/decision mismatch")
    gapless = all(e["seq"] == i + 1 for i, e in enumerate(report["log"]))
    if not gapless:
        problems.append("log sequence has gaps")
    return problems


def check_untrusted_text(report: dict, labels: Iterable[str]) -> list[str]:
    """No app-controlled button label ever appears in the trusted bar."""
    problems = []
    labels = [l for l in labels if l]
    for e in report["timeline"]:
        cur = e["current"]
        if cur is None:
            continue
        for label in labels:
            if label in cur["text"]:
                problems.append(
                    f"untrusted label {label!r} displayed at t={e['t_ms']}"
                )
    return problems


def check_bar_integrity(report: dict) -> list[str]:
    """Writes from outside the system display path are rejected."""
    problems = []
    for f in report["forgeries"]:
        if not f["rejected"]:
            problems.append(f"forged bar write accepted at t={f['t_ms']}")
        for e in report["timeline"]:
            cur = e["current"]
            if cur is not None and f["text"] and f["text"] in cur["text"]:
                problems.append(f"forged text rendered at t={e['t_ms']}")
    return problems


def labels_from_trace(events) -> list[str]:
    out = []
    for ev in events:
        kind = getattr(ev.kind, "value", ev.kind)
        if kind == "InstallApp":
            out.extend(b["label_text"] for b in ev.payload["buttons"])
    return out


def check_all(report: dict, labels: Iterable[str] = ()) -> dict[str, list[str]]:
    return {
        "complete_mediation": check_complete_mediation(report),
        "sp1": check_sp1(report),
        "sp2": check_sp2(report),
        "sp3": check_sp3(report),
        "sp4": check_sp4(report),
        "sp5": check_sp5(report),
        "conservation": check_conservation(report),
        "untrusted_text": check_untrusted_text(report, labels),
        "bar_integrity": check_bar_integrity(report),
    }
