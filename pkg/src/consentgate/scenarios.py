"""Built-in traces: benign task analogs, scripted attacks, and the
interactive worlds used by the live bridge.

The benign tasks walk one consented operation each through its full
lifecycle. The attack traces come in two families: background services
firing requests with no user gesture at all, and a foreground app whose
button advertises one operation while actually being wired to another, so
the pending security message exposes the mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import UnknownScenarioError
from .harness import EventKind, ScenarioEvent
from .world import ConfirmMode, DeviceId, OperationKind, Permission


class TraceBuilder:
    def __init__(self):
        self.events: list[ScenarioEvent] = []
        self._seq = 0

    def at(self, t_ms: int, kind: EventKind, **payload) -> "TraceBuilder":
        self._seq += 1
        self.events.append(
            ScenarioEvent(self._seq, t_ms, kind, payload, line=self._seq)
        )
        return self

    def install(self, t, app_id, name, perms, buttons=(), **extra):
        return self.at(
            t, EventKind.INSTALL_APP, app_id=app_id, display_name=name,
            permissions=[p.value for p in perms], buttons=list(buttons), **extra,
        )

    def foreground(self, t, app_id):
        return self.at(t, EventKind.SET_FOREGROUND, app_id=app_id)

    def down(self, t, button_id):
        return self.at(t, EventKind.GESTURE, gesture="PointerDown", button_id=button_id)

    def move(self, t, inside):
        return self.at(t, EventKind.GESTURE, gesture="PointerMove", inside=inside)

    def up(self, t):
        return self.at(t, EventKind.GESTURE, gesture="PointerUp")

    def scan(self, t):
        return self.at(t, EventKind.GESTURE, gesture="FingerprintScan")

    def chord(self, t):
        return self.at(t, EventKind.GESTURE, gesture="PhysicalChord")

    def request(self, t, app_id, op, device, **extra):
        return self.at(
            t, EventKind.APP_REQUEST, app_id=app_id, op=op.value,
            device=device.value, **extra,
        )

    def release(self, t, app_id):
        return self.at(t, EventKind.APP_RELEASE, app_id=app_id)


def button(button_id, label, op, device, confirm_mode=ConfirmMode.RELEASE_TO_CONFIRM):
    return {
        "button_id": button_id,
        "label_text": label,
        "op": op.value,
        "device": device.value,
        "confirm_mode": confirm_mode.value,
    }


@dataclass(frozen=True)
class Expectation:
    granted: int
    blocked: int
    denied: int

    def check(self, report: dict) -> list[str]:
        s = report["summary"]
        problems = []
        for name, want in (
            ("granted", self.granted),
            ("monitor_blocked", self.blocked),
            ("user_denied", self.denied),
        ):
            if s[name] != want:
                problems.append(f"{name}={s[name]} expected {want}")
        return problems


_PHOTO_PERMS = {Permission.CAMERA, Permission.WRITE_EXTERNAL_STORAGE}
_VIDEO_PERMS = {Permission.RECORD_AUDIO, Permission.CAMERA,
                Permission.WRITE_EXTERNAL_STORAGE}
_AUDIO_PERMS = {Permission.RECORD_AUDIO, Permission.WRITE_EXTERNAL_STORAGE}
_STORAGE_ONLY = {Permission.WRITE_EXTERNAL_STORAGE}


def _t1_take_picture():
    tb = TraceBuilder()
    tb.install(0, "cam.photoshare", "PhotoShare", _PHOTO_PERMS,
               [button("shutter", "Capture", OperationKind.TAKE_PHOTO,
                       DeviceId.FRONT_CAMERA)])
    tb.foreground(10, "cam.photoshare")
    tb.down(1000, "shutter")
    tb.up(1600)
    tb.request(1700, "cam.photoshare", OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA)
    tb.release(4000, "cam.photoshare")
    return tb.events


def _t2_take_video():
    tb = TraceBuilder()
    tb.install(0, "cam.vidcam", "VidCam", _VIDEO_PERMS,
               [button("rec", "REC", OperationKind.RECORD_VIDEO,
                       DeviceId.BACK_CAMERA, ConfirmMode.HOLD_TO_SUSTAIN)])
    tb.foreground(10, "cam.vidcam")
    tb.down(1000, "rec")
    tb.request(1150, "cam.vidcam", OperationKind.RECORD_VIDEO, DeviceId.BACK_CAMERA)
    tb.up(5000)
    return tb.events


def _t3_voice_message():
    tb = TraceBuilder()
    tb.install(0, "chat.voice", "ChatVoice", _AUDIO_PERMS,
               [button("talk", "Hold to talk", OperationKind.RECORD_AUDIO,
                       DeviceId.MICROPHONE, ConfirmMode.HOLD_TO_SUSTAIN)])
    tb.foreground(10, "chat.voice")
    tb.down(1000, "talk")
    tb.request(1100, "chat.voice", OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE)
    tb.up(4200)
    return tb.events


def _t4_video_message():
    tb = TraceBuilder()
    tb.install(0, "call.video", "VideoCall", _VIDEO_PERMS,
               [button("msg", "Video message", OperationKind.RECORD_VIDEO,
                       DeviceId.FRONT_CAMERA)])
    tb.foreground(10, "call.video")
    tb.down(1000, "msg")
    tb.up(1500)
    tb.request(1600, "call.video", OperationKind.RECORD_VIDEO, DeviceId.FRONT_CAMERA)
    tb.release(6000, "call.video")
    return tb.events


def _t5_record_screen():
    tb = TraceBuilder()
    tb.install(0, "tool.screenrec", "ScreenRec", _STORAGE_ONLY,
               [button("go", "Start recording", OperationKind.RECORD_SCREEN,
                       DeviceId.SCREEN_BUFFER)])
    tb.foreground(10, "tool.screenrec")
    tb.down(1000, "go")
    tb.up(1700)
    tb.request(1800, "tool.screenrec", OperationKind.RECORD_SCREEN,
               DeviceId.SCREEN_BUFFER)
    tb.release(7000, "tool.screenrec")
    return tb.events


def _t10_screenshot():
    tb = TraceBuilder()
    tb.install(0, "news.reader", "NewsReader", set(), [])
    tb.foreground(10, "news.reader")
    tb.chord(1000)
    return tb.events


def _stealthy(rat_id, rat_name, perms, op, device):
    tb = TraceBuilder()
    tb.install(0, "net.browser", "WebBrowser", {Permission.INTERNET}, [])
    tb.install(5, rat_id, rat_name, perms, [])
    tb.foreground(10, "net.browser")
    tb.request(1000, rat_id, op, device)
    return tb.events


def _hijack(op, device, label, attentive: bool):
    perms = _VIDEO_PERMS | {Permission.INTERNET}
    tb = TraceBuilder()
    tb.install(0, "fun.glamfilters", "GlamFilters", perms,
               [button("b_main", label, op, device)])
    tb.foreground(10, "fun.glamfilters")
    tb.down(1000, "b_main")
    tb.request(1100, "fun.glamfilters", op, device)
    if attentive:
        tb.move(1800, inside=False)
        tb.up(1900)
    else:
        tb.up(1900)
        tb.release(3000, "fun.glamfilters")
    return tb.events


_RATS = (
    ("rat.shadowlens", "FreePhotoEditor", _PHOTO_PERMS | {Permission.INTERNET},
     OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA),
    ("rat.earwig", "RingtoneStudio", _AUDIO_PERMS | {Permission.INTERNET},
     OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE),
    ("rat.peephole", "ContactsBackup", _VIDEO_PERMS | {Permission.INTERNET},
     OperationKind.RECORD_VIDEO, DeviceId.BACK_CAMERA),
    ("rat.roomscan", "WallpaperPack", _PHOTO_PERMS | {Permission.INTERNET},
     OperationKind.TAKE_PHOTO, DeviceId.BACK_CAMERA),
)


def _rat_1080():
    tb = TraceBuilder()
    tb.install(0, "net.browser", "WebBrowser", {Permission.INTERNET}, [])
    for i, (rat_id, name, perms, _, _) in enumerate(_RATS):
        tb.install(1 + i, rat_id, name, perms, [])
    tb.foreground(8, "net.browser")
    t = 100
    for _ in range(270):
        for rat_id, _, _, op, device in _RATS:
            tb.request(t, rat_id, op, device)
            t += 10
    return tb.events


_BUILTINS = {
    "T1": (_t1_take_picture, Expectation(granted=1, blocked=0, denied=0)),
    "T2": (_t2_take_video, Expectation(granted=1, blocked=0, denied=0)),
    "T3": (_t3_voice_message, Expectation(granted=1, blocked=0, denied=0)),
    "T4": (_t4_video_message, Expectation(granted=1, blocked=0, denied=0)),
    "T5": (_t5_record_screen, Expectation(granted=1, blocked=0, denied=0)),
    "T10": (_t10_screenshot, Expectation(granted=1, blocked=0, denied=0)),
    "A1_stealthy_photo": (
        lambda: _stealthy("rat.shadowlens", "FreePhotoEditor",
                          _PHOTO_PERMS | {Permission.INTERNET},
                          OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA),
        Expectation(granted=0, blocked=1, denied=0),
    ),
    "A2_stealthy_audio": (
        lambda: _stealthy("rat.earwig", "RingtoneStudio",
                          _AUDIO_PERMS | {Permission.INTERNET},
                          OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE),
        Expectation(granted=0, blocked=1, denied=0),
    ),
    "A3_stealthy_video": (
        lambda: _stealthy("rat.peephole", "ContactsBackup",
                          _VIDEO_PERMS | {Permission.INTERNET},
                          OperationKind.RECORD_VIDEO, DeviceId.BACK_CAMERA),
        Expectation(granted=0, blocked=1, denied=0),
    ),
    "A4_stealthy_photos_burst": (
        lambda: _stealthy("rat.roomscan", "WallpaperPack",
                          _PHOTO_PERMS | {Permission.INTERNET},
                          OperationKind.TAKE_PHOTO, DeviceId.BACK_CAMERA),
        Expectation(granted=0, blocked=1, denied=0),
    ),
    "A5_hijack_screenshot": (
        lambda: _hijack(OperationKind.CAPTURE_SCREENSHOT, DeviceId.SCREEN_BUFFER,
                        "Record video", attentive=True),
        Expectation(granted=0, blocked=0, denied=1),
    ),
    "A6_hijack_audio": (
        lambda: _hijack(OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE,
                        "Take photo", attentive=True),
        Expectation(granted=0, blocked=0, denied=1),
    ),
    "A5_hijack_screenshot_confirmed": (
        lambda: _hijack(OperationKind.CAPTURE_SCREENSHOT, DeviceId.SCREEN_BUFFER,
                        "Record video", attentive=False),
        Expectation(granted=1, blocked=0, denied=0),
    ),
    "A6_hijack_audio_confirmed": (
        lambda: _hijack(OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE,
                        "Take photo", attentive=False),
        Expectation(granted=1, blocked=0, denied=0),
    ),
    "RAT_1080": (_rat_1080, Expectation(granted=0, blocked=1080, denied=0)),
}


def builtin_names() -> list[str]:
    return list(_BUILTINS)


def builtin_scenario(name: str) -> list[ScenarioEvent]:
    try:
        build, _ = _BUILTINS[name]
    except KeyError:
        raise UnknownScenarioError(name) from None
    return build()


def builtin_expectation(name: str) -> Expectation:
    try:
        _, exp = _BUILTINS[name]
    except KeyError:
        raise UnknownScenarioError(name) from None
    return exp


def hijack_trace(op: OperationKind, device: DeviceId, label: str,
                 attentive: bool) -> list[ScenarioEvent]:
    """Hijack attempt with scripted attentive (abort) or inattentive
    (confirm) user behavior; used directly by tests."""
    return _hijack(op, device, label, attentive)


# ------------------------------------------------------- interactive worlds


@dataclass(frozen=True)
class Reaction:
    """How an interactive app behaves when its button is pressed: it files
    its request after a small delay, and one-shot operations release the
    device on their own after the capture."""

    op: OperationKind
    device: DeviceId
    request_delay_ms: int = 0
    release_after_ms: Optional[int] = None


@dataclass(frozen=True)
class PeriodicAttack:
    app_id: str
    op: OperationKind
    device: DeviceId
    period_ms: int


@dataclass(frozen=True)
class InteractiveWorld:
    name: str
    events: list[ScenarioEvent]
    reactions: dict[tuple[str, str], Reaction] = field(default_factory=dict)
    periodic: list[PeriodicAttack] = field(default_factory=list)


def _world_benign() -> InteractiveWorld:
    tb = TraceBuilder()
    tb.install(0, "cam.demo", "DemoCamera", _VIDEO_PERMS | _STORAGE_ONLY, [
        button("b_photo", "Photo", OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA),
        button("b_video", "Video", OperationKind.RECORD_VIDEO,
               DeviceId.BACK_CAMERA, ConfirmMode.HOLD_TO_SUSTAIN),
        button("b_voice", "Voice memo", OperationKind.RECORD_AUDIO,
               DeviceId.MICROPHONE, ConfirmMode.HOLD_TO_SUSTAIN),
        button("b_screen", "Screen rec", OperationKind.RECORD_SCREEN,
               DeviceId.SCREEN_BUFFER),
    ])
    tb.foreground(1, "cam.demo")
    reactions = {
        ("cam.demo", "b_photo"): Reaction(OperationKind.TAKE_PHOTO,
                                          DeviceId.FRONT_CAMERA,
                                          release_after_ms=1500),
        ("cam.demo", "b_video"): Reaction(OperationKind.RECORD_VIDEO,
                                          DeviceId.BACK_CAMERA),
        ("cam.demo", "b_voice"): Reaction(OperationKind.RECORD_AUDIO,
                                          DeviceId.MICROPHONE),
        ("cam.demo", "b_screen"): Reaction(OperationKind.RECORD_SCREEN,
                                           DeviceId.SCREEN_BUFFER,
                                           release_after_ms=4000),
    }
    return InteractiveWorld("interactive", tb.events, reactions)


def _world_hijack() -> InteractiveWorld:
    tb = TraceBuilder()
    tb.install(0, "fun.glamfilters", "GlamFilters",
               _VIDEO_PERMS | {Permission.INTERNET}, [
                   button("b_rec", "Record video", OperationKind.CAPTURE_SCREENSHOT,
                          DeviceId.SCREEN_BUFFER),
                   button("b_photo", "Take photo", OperationKind.RECORD_AUDIO,
                          DeviceId.MICROPHONE),
               ])
    tb.foreground(1, "fun.glamfilters")
    reactions = {
        ("fun.glamfilters", "b_rec"): Reaction(OperationKind.CAPTURE_SCREENSHOT,
                                               DeviceId.SCREEN_BUFFER,
                                               release_after_ms=1200),
        ("fun.glamfilters", "b_photo"): Reaction(OperationKind.RECORD_AUDIO,
                                                 DeviceId.MICROPHONE,
                                                 release_after_ms=5000),
    }
    return InteractiveWorld("interactive_hijack", tb.events, reactions)


def _world_rat_demo() -> InteractiveWorld:
    base = _world_benign()
    tb = TraceBuilder()
    tb.events.extend(base.events)
    tb._seq = len(base.events)
    tb.install(2, "rat.shadowlens", "FreePhotoEditor",
               _PHOTO_PERMS | {Permission.INTERNET}, [])
    return InteractiveWorld(
        "rat_demo",
        tb.events,
        dict(base.reactions),
        [PeriodicAttack("rat.shadowlens", OperationKind.TAKE_PHOTO,
                        DeviceId.FRONT_CAMERA, period_ms=4000)],
    )


_WORLDS = {
    "interactive": _world_benign,
    "interactive_hijack": _world_hijack,
    "rat_demo": _world_rat_demo,
}


def world_names() -> list[str]:
    return list(_WORLDS)


def interactive_world(name: str) -> InteractiveWorld:
    try:
        return _WORLDS[name]()
    except KeyError:
        raise UnknownScenarioError(name) from None
