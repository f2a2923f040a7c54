"""Status bar: message texts, rotation, preemption, violations,
full-screen reactivation and write privilege."""

import pytest

from consentgate.display import MessageKind, op_text
from consentgate.harness import EventKind, run_trace
from consentgate.scenarios import TraceBuilder, button
from consentgate.world import ConfirmMode, DeviceId, OperationKind

from conftest import CAPTURE_PERMS, simple_app_trace

AUDIO = OperationKind.RECORD_AUDIO
MIC = DeviceId.MICROPHONE


@pytest.mark.parametrize(
    "kind,op,device,expected",
    [
        (MessageKind.PENDING, OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA,
         "Take photo (F)?"),
        (MessageKind.ONGOING, OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA,
         "Taking photo (F)"),
        (MessageKind.PENDING, OperationKind.RECORD_VIDEO, DeviceId.BACK_CAMERA,
         "Record video (B)?"),
        (MessageKind.ONGOING, OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE,
         "Recording audio"),
        (MessageKind.PENDING, OperationKind.CAPTURE_SCREENSHOT,
         DeviceId.SCREEN_BUFFER, "Take screenshot?"),
        (MessageKind.ONGOING, OperationKind.RECORD_SCREEN, DeviceId.SCREEN_BUFFER,
         "Recording screen"),
        (MessageKind.VIOLATION, OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE,
         "Blocked: record audio"),
        (MessageKind.VIOLATION, OperationKind.TAKE_PHOTO, DeviceId.BACK_CAMERA,
         "Blocked: take photo (B)"),
    ],
)
def test_op_text_table(kind, op, device, expected):
    assert op_text(kind, op, device) == expected


def _two_session_trace(release_first_at=9000, release_second_at=12000):
    tb = TraceBuilder()
    tb.install(0, "a.rec", "AudioRec", CAPTURE_PERMS,
               [button("r", "rec", AUDIO, MIC)])
    tb.install(1, "s.rec", "ScreenCap", CAPTURE_PERMS,
               [button("v", "cap", OperationKind.RECORD_SCREEN,
                       DeviceId.SCREEN_BUFFER)])
    tb.foreground(10, "a.rec")
    tb.down(100, "r")
    tb.up(200)
    tb.request(250, "a.rec", AUDIO, MIC)
    tb.foreground(300, "s.rec")
    tb.down(400, "v")
    tb.up(500)
    tb.request(550, "s.rec", OperationKind.RECORD_SCREEN, DeviceId.SCREEN_BUFFER)
    tb.release(release_first_at, "a.rec")
    tb.release(release_second_at, "s.rec")
    return tb.events


def _displayed_segments(report):
    """(t_from, t_to, kind, ref) over the whole run."""
    out = []
    tl = report["timeline"]
    end = report["summary"]["end_t_ms"]
    for i, e in enumerate(tl):
        t_to = tl[i + 1]["t_ms"] if i + 1 < len(tl) else end
        cur = e["current"]
        if cur:
            out.append((e["t_ms"], t_to, cur["kind"], cur["ref"]))
    return out


def test_single_session_message_constant():
    tb = simple_app_trace(op=AUDIO, device=MIC,
                          confirm_mode=ConfirmMode.HOLD_TO_SUSTAIN)
    tb.down(1000, "b1")
    tb.request(1100, "app.main", AUDIO, MIC)
    tb.up(9000)
    r = run_trace(tb.events)
    ongoing = [s for s in _displayed_segments(r) if s[2] == "Ongoing"]
    # one uninterrupted stretch for the single session
    assert ongoing == [(1100, 9000, "Ongoing", 1)]


def test_two_sessions_alternate_every_interval():
    r = run_trace(_two_session_trace())
    ongoing = [s for s in _displayed_segments(r) if s[2] == "Ongoing"]
    # independent replay of the rotation arithmetic: the metronome starts
    # when the first ongoing message appears (t=250) and flips every 2000
    switches = [t for t, _, k, _ in ongoing]
    flips = [s for s in switches if s > 550 and s < 9000]
    assert flips == [2250, 4250, 6250, 8250]
    refs = [ref for t, _, _, ref in ongoing if 550 <= t < 9000]
    assert refs == [1, 2, 1, 2, 1]
    # both sessions displayed 2000 ms at a time
    for t_from, t_to, _, _ in ongoing:
        if 2250 <= t_from and t_to <= 8250:
            assert t_to - t_from == 2000


def test_terminated_session_leaves_rotation_immediately():
    r = run_trace(_two_session_trace())
    after = [s for s in _displayed_segments(r) if s[0] >= 9000]
    assert all(ref == 2 for _, _, kind, ref in after if kind == "Ongoing")
    rotation_after = [e["rotation"] for e in r["timeline"] if e["t_ms"] >= 9000]
    assert rotation_after[0] == [2]
    assert rotation_after[-1] == []


def test_pending_preempts_rotation_until_resolved():
    tb = TraceBuilder()
    tb.install(0, "a.rec", "AudioRec", CAPTURE_PERMS,
               [button("r", "rec", AUDIO, MIC),
                button("p", "photo", OperationKind.TAKE_PHOTO,
                       DeviceId.FRONT_CAMERA)])
    tb.foreground(10, "a.rec")
    tb.down(100, "r")
    tb.up(200)
    tb.request(250, "a.rec", AUDIO, MIC)
    tb.down(1000, "p")  # pending while a session is ongoing
    tb.move(2000, inside=False)
    tb.up(2100)  # aborted: rotation resumes
    tb.release(5000, "a.rec")
    r = run_trace(tb.events)
    segs = _displayed_segments(r)
    pend = [s for s in segs if s[2] == "Pending" and s[0] == 1000]
    assert pend and pend[0][1] == 2100
    resumed = [s for s in segs if s[0] == 2100]
    assert resumed and resumed[0][2] == "Ongoing"


def test_two_blocks_two_sounds_messages_fifo():
    tb = simple_app_trace()
    tb.request(1000, "app.main", AUDIO, MIC)
    tb.request(1100, "app.main", AUDIO, MIC)
    tb.move(9000, inside=True)  # let the violation queue drain
    r = run_trace(tb.events)
    assert len(r["sounds"]) == 2
    viol = [s for s in _displayed_segments(r) if s[2] == "Violation"]
    # first shows at 1000 for violation_display_ms, then the second
    assert [(v[0], v[1], v[3]) for v in viol] == [(1000, 4000, 1), (4000, 7000, 2)]


def test_no_blocks_no_violation_messages():
    tb = simple_app_trace()
    tb.down(1000, "b1")
    tb.up(1400)
    tb.request(1500, "app.main", OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA)
    tb.release(2000, "app.main")
    r = run_trace(tb.events)
    assert not [s for s in _displayed_segments(r) if s[2] == "Violation"]
    assert r["sounds"] == []


def test_full_screen_reactivates_bar_for_pending():
    tb = simple_app_trace()
    tb.at(500, EventKind.SET_SCREEN_MODE, mode="Immersive")
    tb.down(1000, "b1")
    tb.move(2000, inside=True)  # keep the trace open while the message shows
    r = run_trace(tb.events)
    by_t = {e["t_ms"]: e for e in r["timeline"]}
    assert by_t[500]["visible"] is False  # fullscreen, no messages
    assert by_t[1000]["visible"] is True  # pending message forces the bar
    assert by_t[1000]["current"]["kind"] == "Pending"


def test_visible_whenever_message_current():
    for trace in (_two_session_trace(), simple_app_trace().events):
        r = run_trace(trace)
        for e in r["timeline"]:
            if e["current"] is not None:
                assert e["visible"] is True


def test_forged_write_rejected_and_never_rendered():
    tb = simple_app_trace()
    tb.at(1000, EventKind.FAULT_INJECT, fault="ForgeStatusBarWrite",
          source_app="app.main", text="All clear, nothing recording")
    r = run_trace(tb.events)
    (f,) = r["forgeries"]
    assert f["rejected"] is True
    for e in r["timeline"]:
        assert e["current"] is None or "All clear" not in e["current"]["text"]


def test_bar_text_never_contains_button_label():
    label = "FREE COUPON press here"
    tb = TraceBuilder()
    tb.install(0, "bad.app", "Trickster", CAPTURE_PERMS,
               [button("b", label, AUDIO, MIC)])
    tb.foreground(5, "bad.app")
    tb.down(1000, "b")
    tb.request(1100, "bad.app", AUDIO, MIC)
    tb.up(1500)
    tb.release(4000, "bad.app")
    r = run_trace(tb.events)
    texts = [e["current"]["text"] for e in r["timeline"] if e["current"]]
    assert texts, "messages were displayed"
    assert all(label not in t for t in texts)
    # the monitor's own description is what shows instead
    assert any("Recording audio" in t for t in texts)
