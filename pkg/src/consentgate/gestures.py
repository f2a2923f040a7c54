"""Gesture identification: translates pointer and fingerprint events into
operation bindings, confirmations, aborts and timeouts.

A binding is the unit of consent: one user gesture tied to one
(app, operation, device) triple. Press-and-hold creates it; releasing
inside the button consents; sliding out before release aborts; silence
past the deadline expires it. Apps configured for fingerprint confirmation
consent through a scan instead of the release. A consented binding
authorizes exactly one matching request, which must arrive within a short
grace window of the consent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .world import (
    SYSTEM_APP_ID,
    AppDescriptor,
    ConfirmMode,
    DeviceId,
    GestureModeKind,
    OperationKind,
    SoftButton,
)


class GestureEventKind(str, Enum):
    POINTER_DOWN = "PointerDown"
    POINTER_MOVE = "PointerMove"
    POINTER_UP = "PointerUp"
    FINGERPRINT_SCAN = "FingerprintScan"
    PHYSICAL_CHORD = "PhysicalChord"


@dataclass(frozen=True)
class GestureEvent:
    kind: GestureEventKind
    t: int
    button_id: Optional[str] = None
    inside: Optional[bool] = None


class BindingPhase(str, Enum):
    HELD = "Held"
    AWAITING_REQUEST = "AwaitingRequest"
    CONFIRMED = "Confirmed"
    ABORTED = "Aborted"
    EXPIRED = "Expired"


TERMINAL_PHASES = frozenset(
    {BindingPhase.CONFIRMED, BindingPhase.ABORTED, BindingPhase.EXPIRED}
)


@dataclass
class PendingOperation:
    binding_id: int
    app_id: str
    button_id: str
    op: OperationKind
    device: DeviceId
    confirm_mode: ConfirmMode
    requires_fingerprint: bool
    created_t: int
    deadline_t: int
    phase: BindingPhase = BindingPhase.HELD
    displayed: bool = False
    grace_deadline_t: Optional[int] = None
    resolved_t: Optional[int] = None
    detail: Optional[str] = None
    consumed_by_request: Optional[int] = None
    system: bool = False

    @property
    def live(self) -> bool:
        return self.phase not in TERMINAL_PHASES

    def as_dict(self) -> dict:
        return {
            "binding_id": self.binding_id,
            "app_id": self.app_id,
            "button_id": self.button_id,
            "op": self.op.value,
            "device": self.device.value,
            "confirm_mode": self.confirm_mode.value,
            "created_t": self.created_t,
            "deadline_t": self.deadline_t,
            "phase": self.phase.value,
            "displayed": self.displayed,
            "resolved_t": self.resolved_t,
            "detail": self.detail,
            "consumed_by_request": self.consumed_by_request,
        }


@dataclass
class _Pointer:
    binding_id: int
    inside: bool


@dataclass(frozen=True)
class GestureEffect:
    """What a raw event meant: created | consent | abort | hold_release | noop."""

    kind: str
    binding: Optional[PendingOperation] = None
    detail: Optional[str] = None


_NOOP = GestureEffect("noop")


class GestureTracker:
    """Owns the binding state machine; the engine applies the effects."""

    def __init__(self, pending_timeout_ms: int = 10000, grace_ms: int = 3000):
        self.pending_timeout_ms = pending_timeout_ms
        self.grace_ms = grace_ms
        self._counter = 0
        self._by_app: dict[str, PendingOperation] = {}
        self._pointer: Optional[_Pointer] = None
        self.all_bindings: list[PendingOperation] = []

    # -- lookups -------------------------------------------------------------

    def current_binding(self, app_id: str) -> Optional[PendingOperation]:
        """Latest binding for the app, terminal or not (tie-break lookups)."""
        return self._by_app.get(app_id)

    def live_binding(self, app_id: str) -> Optional[PendingOperation]:
        b = self._by_app.get(app_id)
        return b if b is not None and b.live else None

    def live_bindings(self) -> list[PendingOperation]:
        return [b for b in self._by_app.values() if b.live]

    def get(self, binding_id: int) -> Optional[PendingOperation]:
        for b in self.all_bindings:
            if b.binding_id == binding_id:
                return b
        return None

    # -- raw events -----------------------------------------------------------

    def pointer_down(
        self, app: AppDescriptor, button: Optional[SoftButton], t: int
    ) -> GestureEffect:
        if button is None or self._pointer is not None:
            return _NOOP
        if self.live_binding(app.app_id) is not None:
            # one pending operation per app; extra touches are ignored
            return _NOOP
        b = self._new_binding(
            app_id=app.app_id,
            button_id=button.button_id,
            op=button.declared_op,
            device=button.declared_device,
            confirm_mode=button.confirm_mode,
            requires_fingerprint=app.gesture_mode.kind
            is GestureModeKind.FINGERPRINT_CONFIRM,
            t=t,
        )
        self._pointer = _Pointer(binding_id=b.binding_id, inside=True)
        return GestureEffect("created", b)

    def pointer_move(self, inside: bool, t: int) -> GestureEffect:
        if self._pointer is not None:
            self._pointer.inside = inside
        return _NOOP

    def pointer_up(self, t: int) -> GestureEffect:
        if self._pointer is None:
            return _NOOP
        pointer, self._pointer = self._pointer, None
        b = self.get(pointer.binding_id)
        if b is None:
            return _NOOP
        if b.phase is BindingPhase.CONFIRMED:
            if b.confirm_mode is ConfirmMode.HOLD_TO_SUSTAIN:
                return GestureEffect(
                    "hold_release", b, "inside" if pointer.inside else "outside"
                )
            return _NOOP
        if b.phase is not BindingPhase.HELD:
            return _NOOP
        if not pointer.inside:
            return self._abort(b, t, "slide-out")
        if b.requires_fingerprint:
            return self._abort(b, t, "no-fingerprint")
        if not b.displayed:
            return self._abort(b, t, "message-not-displayed")
        if b.confirm_mode is ConfirmMode.HOLD_TO_SUSTAIN:
            # releasing a hold-to-sustain button before anything was granted
            # withdraws the pending operation
            return self._abort(b, t, "released-before-request")
        return GestureEffect("consent", b)

    def fingerprint(self, t: int) -> GestureEffect:
        if self._pointer is None:
            return _NOOP
        b = self.get(self._pointer.binding_id)
        if b is None or b.phase is not BindingPhase.HELD or not b.requires_fingerprint:
            return _NOOP
        if not b.displayed:
            return self._abort(b, t, "message-not-displayed")
        return GestureEffect("consent", b)

    def create_system_binding(self, t: int) -> PendingOperation:
        """Physical-chord screenshot: hardware input is inherently
        intentional, so the binding starts out already consented."""
        b = self._new_binding(
            app_id=SYSTEM_APP_ID,
            button_id="physical-chord",
            op=OperationKind.CAPTURE_SCREENSHOT,
            device=DeviceId.SCREEN_BUFFER,
            confirm_mode=ConfirmMode.RELEASE_TO_CONFIRM,
            requires_fingerprint=False,
            t=t,
        )
        b.displayed = True
        b.system = True
        b.phase = BindingPhase.AWAITING_REQUEST
        b.grace_deadline_t = t + self.grace_ms
        return b

    # -- phase transitions driven by the engine --------------------------------

    def mark_awaiting(self, b: PendingOperation, t: int) -> None:
        b.phase = BindingPhase.AWAITING_REQUEST
        b.grace_deadline_t = t + self.grace_ms

    def mark_confirmed(self, b: PendingOperation, t: int, request_id: int) -> None:
        b.phase = BindingPhase.CONFIRMED
        b.resolved_t = t
        b.consumed_by_request = request_id

    def mark_aborted(self, b: PendingOperation, t: int, detail: str) -> None:
        b.phase = BindingPhase.ABORTED
        b.resolved_t = t
        b.detail = detail
        if self._pointer is not None and self._pointer.binding_id == b.binding_id:
            self._pointer = None

    def mark_expired(self, b: PendingOperation, t: int, detail: str) -> None:
        b.phase = BindingPhase.EXPIRED
        b.resolved_t = t
        b.detail = detail

    # -- timers -----------------------------------------------------------------

    def next_deadline_t(self) -> Optional[int]:
        due = []
        for b in self.live_bindings():
            if b.phase is BindingPhase.HELD:
                due.append(b.deadline_t)
            elif b.grace_deadline_t is not None:
                due.append(b.grace_deadline_t)
        return min(due) if due else None

    def expire_due(self, t: int) -> list[PendingOperation]:
        """Expired bindings, marked terminal; deadlines fire exactly at t."""
        out = []
        for b in self.live_bindings():
            if b.phase is BindingPhase.HELD and b.deadline_t <= t:
                self.mark_expired(b, t, "timeout")
                out.append(b)
            elif (
                b.phase is BindingPhase.AWAITING_REQUEST
                and b.grace_deadline_t is not None
                and b.grace_deadline_t <= t
            ):
                self.mark_expired(b, t, "unconsumed")
                out.append(b)
        return out

    # -- internals ----------------------------------------------------------------

    def _abort(self, b: PendingOperation, t: int, detail: str) -> GestureEffect:
        self.mark_aborted(b, t, detail)
        return GestureEffect("abort", b, detail)

    def _new_binding(self, app_id, button_id, op, device, confirm_mode,
                     requires_fingerprint, t) -> PendingOperation:
        self._counter += 1
        b = PendingOperation(
            binding_id=self._counter,
            app_id=app_id,
            button_id=button_id,
            op=op,
            device=device,
            confirm_mode=confirm_mode,
            requires_fingerprint=requires_fingerprint,
            created_t=t,
            deadline_t=t + self.pending_timeout_ms,
        )
        self._by_app[app_id] = b
        self.all_bindings.append(b)
        return b
