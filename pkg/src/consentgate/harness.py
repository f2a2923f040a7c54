"""Deterministic trace driver.

A trace is a line-delimited UTF-8 file, one JSON object per line with
exactly the fields {seq, t_ms, kind, payload}. (t_ms, seq) totally orders
the trace; unknown fields anywhere are rejected. Replaying the same trace
produces byte-identical reports apart from host-measured latency fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .audit import RetroAction, RetroActionKind
from .display import ScreenMode
from .engine import Engine, EngineConfig, FaultKind
from .errors import MalformedTraceError, UnknownAppError
from .gestures import GestureEvent, GestureEventKind
from .world import (
    AppDescriptor,
    ConfirmMode,
    DeviceId,
    ExemptReason,
    GestureMode,
    GestureModeKind,
    Lifecycle,
    OperationKind,
    Permission,
    SoftButton,
    compatible_device,
)


class EventKind(str, Enum):
    INSTALL_APP = "InstallApp"
    SET_FOREGROUND = "SetForeground"
    GESTURE = "Gesture"
    APP_REQUEST = "AppRequest"
    APP_RELEASE = "AppRelease"
    SET_SCREEN_MODE = "SetScreenMode"
    SET_GESTURE_MODE = "SetGestureMode"
    RETRO = "Retro"
    FAULT_INJECT = "FaultInject"


@dataclass(frozen=True)
class ScenarioEvent:
    seq: int
    t_ms: int
    kind: EventKind
    payload: dict
    line: int = 0

    def as_dict(self) -> dict:
        return {"seq": self.seq, "t_ms": self.t_ms, "kind": self.kind.value,
                "payload": self.payload}


# payload schema per kind: (required fields, optional fields)
_SCHEMAS: dict[EventKind, tuple[set, set]] = {
    EventKind.INSTALL_APP: (
        {"app_id", "display_name", "permissions", "buttons"},
        {"lifecycle", "gesture_mode", "exempt_reason"},
    ),
    EventKind.SET_FOREGROUND: ({"app_id"}, set()),
    EventKind.GESTURE: ({"gesture"}, {"button_id", "inside"}),
    EventKind.APP_REQUEST: ({"app_id", "op", "device"}, {"via_intent_from"}),
    EventKind.APP_RELEASE: ({"app_id"}, set()),
    EventKind.SET_SCREEN_MODE: ({"mode"}, set()),
    EventKind.SET_GESTURE_MODE: ({"app_id", "mode"}, {"exempt_reason"}),
    EventKind.RETRO: ({"action", "app_id"}, {"permission"}),
    EventKind.FAULT_INJECT: ({"fault"}, {"source_app", "text"}),
}

_BUTTON_REQUIRED = {"button_id", "label_text", "op", "device"}
_BUTTON_OPTIONAL = {"confirm_mode"}


def _enum_value(enum_cls, raw, line: int, what: str):
    try:
        return enum_cls(raw)
    except ValueError:
        raise MalformedTraceError(line, f"bad {what}: {raw!r}") from None


def _check_payload(kind: EventKind, payload: dict, line: int) -> None:
    required, optional = _SCHEMAS[kind]
    keys = set(payload)
    missing = required - keys
    if missing:
        raise MalformedTraceError(line, f"missing payload fields {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise MalformedTraceError(line, f"unknown payload fields {sorted(unknown)}")
    if kind is EventKind.APP_REQUEST:
        op = _enum_value(OperationKind, payload["op"], line, "op")
        device = _enum_value(DeviceId, payload["device"], line, "device")
        if not compatible_device(op, device):
            raise MalformedTraceError(
                line, f"{device.value} cannot serve {op.value}"
            )
    if kind is EventKind.GESTURE:
        _enum_value(GestureEventKind, payload["gesture"], line, "gesture")
    if kind is EventKind.SET_SCREEN_MODE:
        _enum_value(ScreenMode, payload["mode"], line, "screen mode")
    if kind is EventKind.SET_GESTURE_MODE:
        _enum_value(GestureModeKind, payload["mode"], line, "gesture mode")
    if kind is EventKind.RETRO:
        _enum_value(RetroActionKind, payload["action"], line, "retro action")
    if kind is EventKind.FAULT_INJECT:
        _enum_value(FaultKind, payload["fault"], line, "fault kind")
    if kind is EventKind.INSTALL_APP:
        for p in payload["permissions"]:
            _enum_value(Permission, p, line, "permission")
        for b in payload["buttons"]:
            if not isinstance(b, dict):
                raise MalformedTraceError(line, "button must be an object")
            bkeys = set(b)
            if bkeys - _BUTTON_REQUIRED - _BUTTON_OPTIONAL or _BUTTON_REQUIRED - bkeys:
                raise MalformedTraceError(line, f"bad button fields {sorted(bkeys)}")
            _enum_value(OperationKind, b["op"], line, "button op")
            _enum_value(DeviceId, b["device"], line, "button device")
            if "confirm_mode" in b:
                _enum_value(ConfirmMode, b["confirm_mode"], line, "confirm mode")


def parse_trace_lines(lines: Iterable[str]) -> list[ScenarioEvent]:
    events: list[ScenarioEvent] = []
    seen_seq: set[int] = set()
    prev_key: Optional[tuple[int, int]] = None
    for lineno, raw in enumerate(lines, start=1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise MalformedTraceError(lineno, f"invalid JSON: {e.msg}") from None
        if not isinstance(obj, dict):
            raise MalformedTraceError(lineno, "record must be a JSON object")
        keys = set(obj)
        if keys != {"seq", "t_ms", "kind", "payload"}:
            extra = keys - {"seq", "t_ms", "kind", "payload"}
            missing = {"seq", "t_ms", "kind", "payload"} - keys
            what = f"unknown fields {sorted(extra)}" if extra else f"missing fields {sorted(missing)}"
            raise MalformedTraceError(lineno, what)
        if not isinstance(obj["seq"], int) or isinstance(obj["seq"], bool):
            raise MalformedTraceError(lineno, "seq must be an integer")
        if not isinstance(obj["t_ms"], int) or isinstance(obj["t_ms"], bool):
            raise MalformedTraceError(lineno, "t_ms must be an integer")
        if obj["t_ms"] < 0:
            raise MalformedTraceError(lineno, "t_ms must be non-negative")
        if not isinstance(obj["payload"], dict):
            raise MalformedTraceError(lineno, "payload must be an object")
        try:
            kind = EventKind(obj["kind"])
        except ValueError:
            raise MalformedTraceError(lineno, f"unknown kind {obj['kind']!r}") from None
        if obj["seq"] in seen_seq:
            raise MalformedTraceError(lineno, f"duplicate seq {obj['seq']}")
        seen_seq.add(obj["seq"])
        key = (obj["t_ms"], obj["seq"])
        if prev_key is not None and key <= prev_key:
            raise MalformedTraceError(lineno, "trace not ordered by (t_ms, seq)")
        prev_key = key
        _check_payload(kind, obj["payload"], lineno)
        events.append(ScenarioEvent(obj["seq"], obj["t_ms"], kind, obj["payload"], lineno))
    return events


def trace_to_lines(events: Iterable[ScenarioEvent]) -> list[str]:
    return [json.dumps(ev.as_dict(), separators=(",", ":")) for ev in events]


def load_trace(path: str) -> list[ScenarioEvent]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_trace_lines(f)


def _gesture_mode_from(payload: dict, line: int) -> GestureMode:
    kind = GestureModeKind(payload["mode"])
    reason = None
    if kind is GestureModeKind.EXEMPT:
        raw = payload.get("exempt_reason", ExemptReason.USER_WHITELISTED.value)
        reason = _enum_value(ExemptReason, raw, line, "exempt reason")
    return GestureMode(kind, reason)


def dispatch_event(engine: Engine, ev: ScenarioEvent) -> None:
    """Apply one already-validated trace event to the engine."""
    p = ev.payload
    try:
        if ev.kind is EventKind.INSTALL_APP:
            buttons = [
                SoftButton(
                    button_id=b["button_id"],
                    label_text=b["label_text"],
                    declared_op=OperationKind(b["op"]),
                    declared_device=DeviceId(b["device"]),
                    confirm_mode=ConfirmMode(
                        b.get("confirm_mode", ConfirmMode.RELEASE_TO_CONFIRM.value)
                    ),
                )
                for b in p["buttons"]
            ]
            mode = GestureMode(GestureModeKind.STANDARD)
            if "gesture_mode" in p:
                mode = _gesture_mode_from(
                    {"mode": p["gesture_mode"], "exempt_reason": p.get("exempt_reason")},
                    ev.line,
                )
            engine.install_app(
                AppDescriptor(
                    app_id=p["app_id"],
                    display_name=p["display_name"],
                    granted_permissions={Permission(x) for x in p["permissions"]},
                    soft_buttons=buttons,
                    lifecycle=Lifecycle(p.get("lifecycle", Lifecycle.BACKGROUND.value)),
                    gesture_mode=mode,
                )
            )
        elif ev.kind is EventKind.SET_FOREGROUND:
            engine.set_foreground(p["app_id"])
        elif ev.kind is EventKind.GESTURE:
            engine.gesture(
                GestureEvent(
                    kind=GestureEventKind(p["gesture"]),
                    t=ev.t_ms,
                    button_id=p.get("button_id"),
                    inside=p.get("inside"),
                )
            )
        elif ev.kind is EventKind.APP_REQUEST:
            engine.submit_request(
                p["app_id"],
                OperationKind(p["op"]),
                DeviceId(p["device"]),
                via_intent_from=p.get("via_intent_from"),
            )
        elif ev.kind is EventKind.APP_RELEASE:
            engine.app_release(p["app_id"])
        elif ev.kind is EventKind.SET_SCREEN_MODE:
            engine.set_screen_mode(ScreenMode(p["mode"]))
        elif ev.kind is EventKind.SET_GESTURE_MODE:
            engine.set_gesture_mode(p["app_id"], _gesture_mode_from(p, ev.line))
        elif ev.kind is EventKind.RETRO:
            engine.apply_retro_action(
                RetroAction(
                    kind=RetroActionKind(p["action"]),
                    app_id=p["app_id"],
                    permission=Permission(p["permission"]) if "permission" in p else None,
                )
            )
        elif ev.kind is EventKind.FAULT_INJECT:
            engine.inject_fault(
                FaultKind(p["fault"]),
                source_app=p.get("source_app", ""),
                text=p.get("text", ""),
            )
    except UnknownAppError as e:
        raise MalformedTraceError(ev.line or ev.seq, str(e)) from None


def run_trace(events: list[ScenarioEvent], config: Optional[EngineConfig] = None) -> dict:
    """Dispatch a validated trace through a fresh engine; returns the report."""
    engine = Engine(config)
    i = 0
    last_t = 0
    while i < len(events):
        t = events[i].t_ms
        engine.advance_to(t)
        while i < len(events) and events[i].t_ms == t:
            dispatch_event(engine, events[i])
            i += 1
        engine.settle(t)
        last_t = t
    engine.finish(last_t)
    return engine.build_report(events=len(events))


def run_path(path: str, config: Optional[EngineConfig] = None) -> dict:
    return run_trace(load_trace(path), config)
