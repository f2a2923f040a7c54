"""Acceptance suite: one test per release criterion, at its stated
tolerance. Run with -s to see the per-criterion PASS lines."""

import random
import time
from itertools import chain, combinations

from consentgate.bench import bench
from consentgate.harness import EventKind, run_trace
from consentgate.scenarios import (
    TraceBuilder,
    builtin_names,
    builtin_scenario,
    button,
    hijack_trace,
)
from consentgate.verify import (
    check_all,
    check_bar_integrity,
    check_sp3,
    check_sp4,
    labels_from_trace,
    reports_equal_masked,
)
from consentgate.world import (
    ConfirmMode,
    DeviceId,
    OperationKind,
    Permission,
    classify_stealth_capabilities,
    required_permissions,
)

from conftest import CAPTURE_PERMS, random_trace


def _report(name: str, ok: bool, extra: str = "") -> None:
    suffix = f" ({extra})" if extra else ""
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}{suffix}")


def test_stealthy_attack_blocking():
    t0 = time.perf_counter()
    report = run_trace(builtin_scenario("RAT_1080"))
    elapsed = time.perf_counter() - t0
    s = report["summary"]
    assert s["granted"] == 0
    assert s["monitor_blocked"] == 1080
    assert s["log"]["Blocked"] == 1080
    assert elapsed < 5.0, f"RAT_1080 took {elapsed:.2f}s"
    for name in ("A1_stealthy_photo", "A2_stealthy_audio", "A3_stealthy_video",
                 "A4_stealthy_photos_burst"):
        r = run_trace(builtin_scenario(name))
        assert r["summary"]["granted"] == 0, name
        assert r["summary"]["monitor_blocked"] == 1, name
        assert r["summary"]["sound_events"] == 1, name
    _report("stealthy-attack-blocking", True, f"RAT_1080 in {elapsed:.2f}s")


def test_hijack_surfacing():
    cases = [
        (OperationKind.CAPTURE_SCREENSHOT, DeviceId.SCREEN_BUFFER,
         "Record video", "Take screenshot?", "CaptureScreenshot"),
        (OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE,
         "Take photo", "Record audio?", "RecordAudio"),
    ]
    for op, device, label, expected_text, opname in cases:
        attentive = run_trace(hijack_trace(op, device, label, attentive=True))
        pendings = [e["current"]["text"] for e in attentive["timeline"]
                    if e["current"] and e["current"]["kind"] == "Pending"]
        assert pendings, "pending message displayed"
        assert all(expected_text in t for t in pendings)
        assert all(label not in t for t in pendings)
        assert attentive["summary"]["log"]["Denied"] == 1
        assert attentive["sessions"] == []
        confirmed = run_trace(hijack_trace(op, device, label, attentive=False))
        granted_ops = {d["op"] for d in confirmed["decisions"]
                       if d["stage"] == "Granted"}
        assert granted_ops == {opname}
        assert len(confirmed["sessions"]) == 1
    _report("hijack-surfacing", True)


def test_benign_functionality():
    for name in ("T1", "T2", "T3", "T4", "T5", "T10"):
        r = run_trace(builtin_scenario(name))
        s = r["summary"]
        assert s["log"]["Authorized"] == 1, name
        assert s["log"]["Terminated"] == 1, name
        assert s["log"]["Blocked"] == 0 and s["log"]["Denied"] == 0, name
    _report("benign-functionality", True)


def test_permission_table_oracle():
    oracle = {
        OperationKind.TAKE_PHOTO: {
            Permission.CAMERA, Permission.WRITE_EXTERNAL_STORAGE},
        OperationKind.RECORD_VIDEO: {
            Permission.RECORD_AUDIO, Permission.CAMERA,
            Permission.WRITE_EXTERNAL_STORAGE},
        OperationKind.RECORD_AUDIO: {
            Permission.RECORD_AUDIO, Permission.WRITE_EXTERNAL_STORAGE},
        OperationKind.CAPTURE_SCREENSHOT: {Permission.WRITE_EXTERNAL_STORAGE},
        OperationKind.RECORD_SCREEN: {Permission.WRITE_EXTERNAL_STORAGE},
    }
    t0 = time.perf_counter()
    perms = sorted(Permission, key=lambda p: p.value)
    subsets = [set(c) for c in chain.from_iterable(
        combinations(perms, k) for k in range(len(perms) + 1))]
    assert len(subsets) == 16
    for op in OperationKind:
        assert required_permissions(op) == oracle[op]
    for subset in subsets:
        expected = {op for op, req in oracle.items() if req <= subset}
        assert classify_stealth_capabilities(subset) == expected
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _report("permission-table-oracle", True, f"{elapsed * 1000:.0f}ms")


def test_security_property_suite_randomized():
    rng = random.Random(987654321)
    t0 = time.perf_counter()
    for i in range(1000):
        events = random_trace(rng)
        report = run_trace(events)
        problems = {k: v for k, v in
                    check_all(report, labels_from_trace(events)).items() if v}
        assert problems == {}, f"trace {i}: {problems}"
    elapsed = time.perf_counter() - t0
    _report("security-properties-randomized", True,
            f"1000 traces in {elapsed:.1f}s")


def _session_base(confirm=ConfirmMode.HOLD_TO_SUSTAIN):
    tb = TraceBuilder()
    tb.install(0, "cam.x", "CamX", CAPTURE_PERMS,
               [button("r", "rec", OperationKind.RECORD_AUDIO,
                       DeviceId.MICROPHONE, confirm)])
    tb.foreground(10, "cam.x")
    return tb


def test_fault_injection_falsifies_targeted_invariants():
    # SuppressDisplay: the session loses visibility, so only the
    # visibility property fails, and the monitor kills the session
    tb = _session_base()
    tb.down(1000, "r")
    tb.request(1100, "cam.x", OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE)
    tb.at(2000, EventKind.FAULT_INJECT, fault="SuppressDisplay")
    tb.up(2500)
    r = run_trace(tb.events)
    assert check_sp3(r), "SuppressDisplay must falsify SP3"
    others = {k: v for k, v in check_all(r).items() if v and k != "sp3"}
    assert others == {}
    assert [s["reason"] for s in r["sessions"]] == ["OngoingViolation"]

    # SkipLog: the grant goes unlogged, so only the logging property
    # fails, and the monitor kills the session
    tb = _session_base()
    tb.at(500, EventKind.FAULT_INJECT, fault="SkipLog")
    tb.down(1000, "r")
    tb.request(1100, "cam.x", OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE)
    tb.up(4000)
    r = run_trace(tb.events)
    assert check_sp4(r), "SkipLog must falsify SP4"
    others = {k: v for k, v in check_all(r).items() if v and k != "sp4"}
    assert others == {}
    assert [s["reason"] for s in r["sessions"]] == ["OngoingViolation"]

    # ForgeStatusBarWrite: the write is rejected, nothing is falsified
    tb = _session_base()
    tb.down(1000, "r")
    tb.request(1100, "cam.x", OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE)
    tb.at(2000, EventKind.FAULT_INJECT, fault="ForgeStatusBarWrite",
          source_app="cam.x", text="Nothing is being recorded")
    tb.up(4000)
    r = run_trace(tb.events)
    assert r["forgeries"] == [{"t_ms": 2000, "source": "cam.x",
                               "text": "Nothing is being recorded",
                               "rejected": True}]
    assert check_bar_integrity(r) == []
    assert {k: v for k, v in check_all(r).items() if v} == {}
    _report("fault-injection", True)


def test_determinism_all_builtins():
    for name in builtin_names():
        a = run_trace(builtin_scenario(name))
        b = run_trace(builtin_scenario(name))
        assert reports_equal_masked(a, b), name
    _report("determinism", True)


def test_performance_bench_10000():
    result = bench(10000)
    lines = []
    for name, p in result["paths"].items():
        g = p["granted"]["mean_us"]
        k = p["blocked"]["mean_us"]
        assert g < 100.0, f"{name} granted mean {g:.1f}us"
        assert k < 100.0, f"{name} blocked mean {k:.1f}us"
        lines.append(
            f"{name}: granted {g:.1f}us blocked {k:.1f}us "
            f"overhead {p['overhead_ratio'] * 100:.0f}%"
        )
    _report("performance", True, "; ".join(lines))
