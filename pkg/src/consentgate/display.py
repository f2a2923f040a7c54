"""Privileged status-bar channel for security messages.

Message text is always derived from the actual (operation, device) pair and
the registry display name, never from app-supplied button labels. Pending
messages preempt the ongoing rotation; a queued violation notice preempts
ongoing messages but not a pending one, since the pending message is what
the user must read before consenting.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .world import CAMERAS, DeviceId, OperationKind


class ScreenMode(str, Enum):
    NORMAL = "Normal"
    LEAN_BACK = "LeanBack"
    IMMERSIVE = "Immersive"


class MessageKind(str, Enum):
    PENDING = "Pending"
    ONGOING = "Ongoing"
    VIOLATION = "Violation"


_PENDING_PHRASE = {
    OperationKind.TAKE_PHOTO: "Take photo",
    OperationKind.RECORD_VIDEO: "Record video",
    OperationKind.RECORD_AUDIO: "Record audio",
    OperationKind.CAPTURE_SCREENSHOT: "Take screenshot",
    OperationKind.RECORD_SCREEN: "Record screen",
}

_ONGOING_PHRASE = {
    OperationKind.TAKE_PHOTO: "Taking photo",
    OperationKind.RECORD_VIDEO: "Recording video",
    OperationKind.RECORD_AUDIO: "Recording audio",
    OperationKind.CAPTURE_SCREENSHOT: "Taking screenshot",
    OperationKind.RECORD_SCREEN: "Recording screen",
}


def _camera_marker(device: DeviceId) -> str:
    if device is DeviceId.FRONT_CAMERA:
        return " (F)"
    if device is DeviceId.BACK_CAMERA:
        return " (B)"
    return ""


def op_text(kind: MessageKind, op: OperationKind, device: DeviceId) -> str:
    """Monitor-generated operation text; (F)/(B) mark which camera."""
    marker = _camera_marker(device) if device in CAMERAS else ""
    if kind is MessageKind.PENDING:
        return f"{_PENDING_PHRASE[op]}{marker}?"
    if kind is MessageKind.ONGOING:
        return f"{_ONGOING_PHRASE[op]}{marker}"
    return f"Blocked: {_PENDING_PHRASE[op].lower()}{marker}"


@dataclass(frozen=True)
class SecurityMessage:
    kind: MessageKind
    app_id: str
    app_display_name: str
    op: OperationKind
    device: DeviceId
    ref_id: int  # binding id for pending, session id for ongoing, request id for violation

    @property
    def op_text(self) -> str:
        return op_text(self.kind, self.op, self.device)

    @property
    def text(self) -> str:
        return f"{self.app_display_name} — {self.op_text}"

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "app_id": self.app_id,
            "text": self.text,
            "ref": self.ref_id,
        }


class StatusBar:
    """Single writer of the trusted bar state; everything else is rejected.

    The bar is visible whenever a security message is current, regardless of
    full-screen mode: posting a message in LeanBack/Immersive forcibly
    re-shows the bar.
    """

    def __init__(
        self,
        alternation_interval_ms: int = 2000,
        violation_display_ms: int = 3000,
        record_timeline: bool = True,
    ):
        self.alternation_interval_ms = alternation_interval_ms
        self.violation_display_ms = violation_display_ms
        self.screen_mode = ScreenMode.NORMAL
        self.suppressed = False
        self._pending: list[SecurityMessage] = []
        self._rotation: list[SecurityMessage] = []
        self._rotation_index = 0
        self._next_rotation_t: Optional[int] = None
        self._violations: deque[SecurityMessage] = deque()
        self._violation_until_t: Optional[int] = None
        self._record_timeline = record_timeline
        self.timeline: list[dict] = []
        self.forgeries: list[dict] = []

    # -- current state ----------------------------------------------------

    def current_message(self) -> Optional[SecurityMessage]:
        if self.suppressed:
            return None
        if self._pending:
            return self._pending[-1]
        if self._violations:
            return self._violations[0]
        if self._rotation:
            return self._rotation[self._rotation_index % len(self._rotation)]
        return None

    def visible(self) -> bool:
        if self.current_message() is not None:
            return True
        return self.screen_mode is ScreenMode.NORMAL

    def rotation_contains(self, session_id: int) -> bool:
        if self.suppressed:
            return False
        return any(m.ref_id == session_id for m in self._rotation)

    def rotation_messages(self) -> list[SecurityMessage]:
        return [] if self.suppressed else list(self._rotation)

    def displayed_pending_ref(self) -> Optional[int]:
        cur = self.current_message()
        if cur is not None and cur.kind is MessageKind.PENDING:
            return cur.ref_id
        return None

    # -- mutations (engine only) -------------------------------------------

    def post_pending(self, msg: SecurityMessage, t: int) -> bool:
        """Show a pending-consent message. Returns False when the display
        channel is suppressed and the user cannot actually see it."""
        self._pending.append(msg)
        self._record(t)
        return not self.suppressed

    def remove_pending(self, binding_id: int, t: int) -> None:
        self._pending = [m for m in self._pending if m.ref_id != binding_id]
        self._record(t)

    def add_ongoing(self, msg: SecurityMessage, t: int) -> None:
        self._rotation.append(msg)
        if self._next_rotation_t is None:
            self._next_rotation_t = t + self.alternation_interval_ms
        self._record(t)

    def remove_ongoing(self, session_id: int, t: int) -> None:
        before = self.current_message()
        kept = [m for m in self._rotation if m.ref_id != session_id]
        if before is not None and before.kind is MessageKind.ONGOING:
            # keep the displayed message stable across the removal
            try:
                self._rotation_index = kept.index(before)
            except ValueError:
                self._rotation_index = self._rotation_index % max(len(kept), 1)
        self._rotation = kept
        if not kept:
            self._rotation_index = 0
            self._next_rotation_t = None
        self._record(t)

    def post_violation(self, msg: SecurityMessage, t: int) -> None:
        self._violations.append(msg)
        if self._violation_until_t is None:
            self._violation_until_t = t + self.violation_display_ms
        self._record(t)

    def set_screen_mode(self, mode: ScreenMode, t: int) -> None:
        self.screen_mode = mode
        self._record(t)

    def suppress(self, t: int) -> None:
        """Fault injection: the display channel stops rendering messages."""
        self.suppressed = True
        self._record(t)

    def attempt_external_write(self, source_app: str, text: str, t: int) -> None:
        """Any write not coming from the system display path is rejected."""
        self.forgeries.append(
            {"t_ms": t, "source": source_app, "text": text, "rejected": True}
        )

    # -- timers -------------------------------------------------------------

    def next_due_t(self) -> Optional[int]:
        candidates = []
        if len(self._rotation) > 1 and self._next_rotation_t is not None:
            candidates.append(self._next_rotation_t)
        if self._violations and self._violation_until_t is not None:
            candidates.append(self._violation_until_t)
        return min(candidates) if candidates else None

    def on_time(self, t: int) -> None:
        """Advance rotation and violation display up to virtual time t."""
        changed = False
        while (
            self._violations
            and self._violation_until_t is not None
            and self._violation_until_t <= t
        ):
            self._violations.popleft()
            self._violation_until_t = (
                self._violation_until_t + self.violation_display_ms
                if self._violations
                else None
            )
            changed = True
        while (
            len(self._rotation) > 1
            and self._next_rotation_t is not None
            and self._next_rotation_t <= t
        ):
            self._rotation_index = (self._rotation_index + 1) % len(self._rotation)
            self._next_rotation_t += self.alternation_interval_ms
            changed = True
        if self._rotation and self._next_rotation_t is None:
            self._next_rotation_t = t + self.alternation_interval_ms
        if changed:
            self._record(t)

    # -- timeline -------------------------------------------------------------

    def _state(self) -> dict:
        cur = self.current_message()
        return {
            "visible": self.visible(),
            "screen_mode": self.screen_mode.value,
            "suppressed": self.suppressed,
            "current": cur.as_dict() if cur else None,
            "rotation": [] if self.suppressed else [m.ref_id for m in self._rotation],
        }

    def _record(self, t: int) -> None:
        if not self._record_timeline:
            return
        state = self._state()
        if self.timeline:
            last = self.timeline[-1]
            prev = {k: last[k] for k in state}
            if prev == state:
                return
            if last["t_ms"] == t:
                self.timeline[-1] = {"t_ms": t, **state}
                if len(self.timeline) >= 2:
                    before = self.timeline[-2]
                    if {k: before[k] for k in state} == state:
                        self.timeline.pop()
                return
        self.timeline.append({"t_ms": t, **state})
