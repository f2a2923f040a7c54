"""Shared helpers: quick world/trace builders and a seeded random-trace
generator used by the security-property suites."""

from __future__ import annotations

import random

import pytest

from consentgate.harness import EventKind, ScenarioEvent
from consentgate.scenarios import TraceBuilder, button
from consentgate.world import (
    ConfirmMode,
    DeviceId,
    OperationKind,
    Permission,
)

ALL_PERMS = set(Permission)
CAPTURE_PERMS = {
    Permission.CAMERA,
    Permission.RECORD_AUDIO,
    Permission.WRITE_EXTERNAL_STORAGE,
}

OP_DEVICE_CHOICES = [
    (OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA),
    (OperationKind.TAKE_PHOTO, DeviceId.BACK_CAMERA),
    (OperationKind.RECORD_VIDEO, DeviceId.FRONT_CAMERA),
    (OperationKind.RECORD_VIDEO, DeviceId.BACK_CAMERA),
    (OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE),
    (OperationKind.CAPTURE_SCREENSHOT, DeviceId.SCREEN_BUFFER),
    (OperationKind.RECORD_SCREEN, DeviceId.SCREEN_BUFFER),
]


def simple_app_trace(
    op=OperationKind.TAKE_PHOTO,
    device=DeviceId.FRONT_CAMERA,
    confirm_mode=ConfirmMode.RELEASE_TO_CONFIRM,
    perms=None,
) -> TraceBuilder:
    """One app, one button, foregrounded; caller appends the interaction."""
    tb = TraceBuilder()
    tb.install(
        0,
        "app.main",
        "MainApp",
        CAPTURE_PERMS if perms is None else perms,
        [button("b1", "Go", op, device, confirm_mode)],
    )
    tb.foreground(5, "app.main")
    return tb


def random_trace(rng: random.Random) -> list[ScenarioEvent]:
    """A structurally valid but behaviorally random trace."""
    tb = TraceBuilder()
    app_ids = []
    t = 0
    for i in range(rng.randint(2, 3)):
        app_id = f"app.{i}"
        buttons = []
        for j in range(rng.randint(1, 2)):
            op, device = rng.choice(OP_DEVICE_CHOICES)
            mode = rng.choice(list(ConfirmMode))
            buttons.append(button(f"b{i}{j}", f"Label {i}{j}", op, device, mode))
        perms = set(CAPTURE_PERMS) if rng.random() < 0.8 else {
            p for p in ALL_PERMS if rng.random() < 0.5
        }
        tb.install(t, app_id, f"App{i}", perms, buttons)
        app_ids.append(app_id)
        t += 1
    rat_id = "app.rat"
    tb.install(t, rat_id, "RatApp", set(CAPTURE_PERMS), [])
    t += 1
    installed = set(app_ids) | {rat_id}
    fg = rng.choice(app_ids)
    tb.foreground(t, fg)
    t += rng.randint(5, 50)
    buttons_of = {a: [f"b{a[-1]}{j}" for j in range(2)] for a in app_ids}

    for _ in range(rng.randint(18, 40)):
        t += rng.randint(20, 900)
        roll = rng.random()
        if roll < 0.22:
            tb.down(t, rng.choice(buttons_of.get(fg, ["bX"]) + ["nothing"]))
        elif roll < 0.32:
            tb.move(t, rng.random() < 0.6)
        elif roll < 0.50:
            tb.up(t)
        elif roll < 0.54:
            tb.scan(t)
        elif roll < 0.58:
            tb.chord(t)
        elif roll < 0.80:
            requester = rng.choice(sorted(installed))
            op, device = rng.choice(OP_DEVICE_CHOICES)
            tb.request(t, requester, op, device)
        elif roll < 0.88:
            releaser = rng.choice(sorted(installed))
            tb.release(t, releaser)
        elif roll < 0.93:
            fg = rng.choice(sorted(installed & set(app_ids)) or [rat_id])
            tb.foreground(t, fg)
        elif roll < 0.96:
            tb.at(t, EventKind.SET_SCREEN_MODE,
                  mode=rng.choice(["Normal", "LeanBack", "Immersive"]))
        elif roll < 0.985:
            target = rng.choice(sorted(installed))
            mode = rng.choice(["Standard", "FingerprintConfirm", "Exempt"])
            payload = {"app_id": target, "mode": mode}
            if mode == "Exempt":
                payload["exempt_reason"] = rng.choice(
                    ["UserWhitelisted", "RemoteController"]
                )
            tb.at(t, EventKind.SET_GESTURE_MODE, **payload)
        else:
            target = rng.choice(sorted(installed))
            tb.at(t, EventKind.RETRO, action="RevokePermission", app_id=target,
                  permission=rng.choice([p.value for p in Permission]))
    return tb.events


@pytest.fixture
def rng():
    return random.Random(20260811)
