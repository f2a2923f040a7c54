"""The conditional engine: the heart of the monitor.

Request handling works in two layers. The conventional permission check
runs first and short-circuits on denial. Requests that pass are judged
against the preconditions: the charged app must hold a live gesture
binding whose declared (operation, device) pair equals the request's (P1),
the request must have arrived through the operation's fixed service (P2,
structural here but still recorded), the monitor's own pending message
must have been displayed (P3), and the user must have approved through the
confirm gesture (P4). A request arriving while its binding is still held
parks until the user releases, slides out, or the deadline passes.

Grants open an authorized session: devices are acquired exclusively, the
ongoing message joins the status-bar rotation, and the authorized log
entry is written. Every monitor tick re-asserts the ongoing conditions
(message still in rotation, session still logged); a violation terminates
the session. Termination releases devices, logs, and clears the display,
which are the three exit conditions.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from time import perf_counter_ns
from typing import Optional

from .audit import AccessLog, LogCategory, RetroAction, RetroActionKind
from .clock import VirtualClock
from .display import MessageKind, ScreenMode, SecurityMessage, StatusBar
from .errors import AlreadyTerminatedError, SimulationError
from .gestures import (
    BindingPhase,
    GestureEvent,
    GestureEventKind,
    GestureTracker,
    PendingOperation,
)
from .mediation import AccessRequest, HookKind, HookStream, MediationStage
from .rules import RuleId
from .world import (
    CONTINUOUS_OPS,
    SERVICE_FOR_OP,
    SYSTEM_APP_ID,
    ConfirmMode,
    DeviceId,
    GestureModeKind,
    OperationKind,
    World,
    check_permissions,
    compatible_device,
    devices_for,
    required_permissions,
)


class FaultKind(str, Enum):
    SUPPRESS_DISPLAY = "SuppressDisplay"
    FORGE_STATUS_BAR_WRITE = "ForgeStatusBarWrite"
    SKIP_LOG = "SkipLog"


class TerminationReason(str, Enum):
    USER_RELEASED = "UserReleased"
    USER_ABORTED = "UserAborted"
    APP_RELEASED = "AppReleased"
    ONGOING_VIOLATION = "OngoingViolation"
    RETRO_REVOKED = "RetroRevoked"
    DEVICE_BUSY = "DeviceBusy"
    SIMULATION_END = "SimulationEnd"


@dataclass
class EngineConfig:
    pending_timeout_ms: int = 10000
    grace_ms: int = 3000
    alternation_interval_ms: int = 2000
    violation_display_ms: int = 3000
    record_timeline: bool = True
    record_hooks: bool = True

    def as_dict(self) -> dict:
        return {
            "pending_timeout_ms": self.pending_timeout_ms,
            "grace_ms": self.grace_ms,
            "alternation_interval_ms": self.alternation_interval_ms,
            "violation_display_ms": self.violation_display_ms,
        }


@dataclass
class AuthorizedSession:
    session_id: int
    app_id: str  # charged app: owns the consent and the display identity
    requester_app_id: str
    op: OperationKind
    device: DeviceId
    devices: tuple[DeviceId, ...]
    binding_id: Optional[int]
    exempt: bool
    started_t: int
    active: bool = True
    reason: Optional[TerminationReason] = None
    ended_t: Optional[int] = None
    last_read_t: int = -1
    e2_logged: bool = False
    e3_visible: bool = False

    def as_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "app_id": self.app_id,
            "requester_app_id": self.requester_app_id,
            "op": self.op.value,
            "device": self.device.value,
            "devices": [d.value for d in self.devices],
            "binding_id": self.binding_id,
            "exempt": self.exempt,
            "started_t": self.started_t,
            "ended_t": self.ended_t,
            "reason": self.reason.value if self.reason else None,
            "exit": {"E1": not self.active, "E2": self.e2_logged, "E3": self.e3_visible},
        }


@dataclass
class _Parked:
    req: AccessRequest
    arrival_ns: int


class Engine:
    """Single-threaded event-loop core; all module state is owned here."""

    def __init__(self, config: Optional[EngineConfig] = None):
        self.config = config or EngineConfig()
        self.clock = VirtualClock()
        self.hooks = HookStream(record=self.config.record_hooks)
        self.world = World(on_device_event=self._on_device_event)
        self.display = StatusBar(
            alternation_interval_ms=self.config.alternation_interval_ms,
            violation_display_ms=self.config.violation_display_ms,
            record_timeline=self.config.record_timeline,
        )
        self.log = AccessLog()
        self.gestures = GestureTracker(
            pending_timeout_ms=self.config.pending_timeout_ms,
            grace_ms=self.config.grace_ms,
        )
        self.sessions: dict[int, AuthorizedSession] = {}
        self.decisions: list[dict] = []
        self.sounds: list[dict] = []
        self._parked: dict[int, _Parked] = {}
        self._hold_links: dict[int, int] = {}
        self._completions: list[tuple[int, int, int]] = []
        self._completion_seq = 0
        self._request_counter = 0
        self._session_counter = 0
        self._authorized_logged: set[int] = set()
        self._skip_log = False

    # ------------------------------------------------------------------ time

    def advance_to(self, t: int) -> None:
        """Advance virtual time, firing due timers and monitoring sessions
        at each intermediate instant and at t itself."""
        while True:
            nt = self._next_timer_t()
            if nt is None or nt >= t:
                break
            self.clock.advance_to(nt)
            self._fire_due(nt)
            self._monitor_pass(nt)
        if t > self.clock.now_ms:
            self.clock.advance_to(t)
            self._monitor_pass(t)

    def settle(self, t: int) -> None:
        """Fire timers due exactly at t, after the events at t have applied
        (a release arriving right at the deadline still counts)."""
        self._fire_due(t)

    def finish(self, end_t: Optional[int] = None) -> None:
        """End of trace: resolve leftover bindings and close every session.

        Scheduled one-shot completions (a capture finishing on the next
        tick) still run; only open-ended state is torn down.
        """
        t = max(end_t if end_t is not None else 0, self.clock.now_ms)
        if self._completions:
            t = max(t, max(ct for ct, _, _ in self._completions))
        self.advance_to(t)
        self.settle(t)
        for b in list(self.gestures.live_bindings()):
            self.gestures.mark_expired(b, t, "trace-end")
            self._binding_terminal(b, t)
        for s in list(self.sessions.values()):
            if s.active:
                self._terminate(s, TerminationReason.SIMULATION_END, t)

    def _next_timer_t(self) -> Optional[int]:
        candidates = []
        for v in (self.display.next_due_t(), self.gestures.next_deadline_t()):
            if v is not None:
                candidates.append(v)
        if self._completions:
            candidates.append(self._completions[0][0])
        return min(candidates) if candidates else None

    def _fire_due(self, t: int) -> None:
        self.display.on_time(t)
        for b in self.gestures.expire_due(t):
            self._binding_terminal(b, t)
        while self._completions and self._completions[0][0] <= t:
            _, _, sid = heapq.heappop(self._completions)
            s = self.sessions.get(sid)
            if s is not None and s.active:
                self._terminate(s, TerminationReason.APP_RELEASED, t)

    def _monitor_pass(self, t: int) -> None:
        for s in list(self.sessions.values()):
            if not s.active:
                continue
            o1 = self.display.rotation_contains(s.session_id)
            o2 = s.session_id in self._authorized_logged
            if not (o1 and o2):
                broken = "O1" if not o1 else "O2"
                self._violation_alert(s.app_id, s.op, s.device, s.session_id, t)
                self._terminate(
                    s, TerminationReason.ONGOING_VIOLATION, t, detail=broken
                )
            elif s.op in CONTINUOUS_OPS and t > s.last_read_t:
                s.last_read_t = t
                self.hooks.emit(
                    HookKind.SENSOR_READ, t, session_id=s.session_id,
                    device=s.device.value,
                )

    # ------------------------------------------------------- world operations

    def install_app(self, app) -> None:
        self.world.install(app)

    def set_foreground(self, app_id: str) -> None:
        self.world.set_foreground(app_id)

    def set_screen_mode(self, mode: ScreenMode) -> None:
        self.display.set_screen_mode(mode, self.clock.now_ms)

    def set_gesture_mode(self, app_id: str, mode) -> None:
        self.world.require(app_id).gesture_mode = mode

    def inject_fault(self, kind: FaultKind, source_app: str = "", text: str = "") -> None:
        t = self.clock.now_ms
        if kind is FaultKind.SUPPRESS_DISPLAY:
            self.display.suppress(t)
        elif kind is FaultKind.SKIP_LOG:
            self._skip_log = True
        elif kind is FaultKind.FORGE_STATUS_BAR_WRITE:
            self.display.attempt_external_write(source_app, text, t)

    # ------------------------------------------------------------ gestures

    def gesture(self, ev: GestureEvent) -> None:
        t = self.clock.now_ms
        self.hooks.emit(
            HookKind.INPUT_EVENT, t, gesture=ev.kind.value,
            button_id=ev.button_id,
        )
        if ev.kind is GestureEventKind.POINTER_DOWN:
            fg = self.world.foreground()
            if fg is None:
                return
            button = fg.button(ev.button_id) if ev.button_id else None
            eff = self.gestures.pointer_down(fg, button, t)
            if eff.kind == "created":
                b = eff.binding
                msg = SecurityMessage(
                    MessageKind.PENDING, b.app_id, self._display_name(b.app_id),
                    b.op, b.device, b.binding_id,
                )
                b.displayed = self.display.post_pending(msg, t)
        elif ev.kind is GestureEventKind.POINTER_MOVE:
            self.gestures.pointer_move(bool(ev.inside), t)
        elif ev.kind is GestureEventKind.POINTER_UP:
            self._apply_effect(self.gestures.pointer_up(t), t)
        elif ev.kind is GestureEventKind.FINGERPRINT_SCAN:
            self._apply_effect(self.gestures.fingerprint(t), t)
        elif ev.kind is GestureEventKind.PHYSICAL_CHORD:
            self._chord(t)

    def _apply_effect(self, eff, t: int) -> None:
        if eff.kind == "consent":
            b = eff.binding
            parked = self._parked.pop(b.binding_id, None)
            if parked is not None:
                self.gestures.mark_confirmed(b, t, parked.req.request_id)
                self.display.remove_pending(b.binding_id, t)
                rules = {
                    RuleId.P1: True, RuleId.P2: True,
                    RuleId.P3: b.displayed, RuleId.P4: True,
                }
                self._grant(parked.req, b, t, parked.arrival_ns, rules)
            else:
                self.gestures.mark_awaiting(b, t)
        elif eff.kind == "abort":
            self._binding_terminal(eff.binding, t)
        elif eff.kind == "hold_release":
            sid = self._hold_links.pop(eff.binding.binding_id, None)
            s = self.sessions.get(sid) if sid is not None else None
            if s is not None and s.active:
                reason = (
                    TerminationReason.USER_RELEASED
                    if eff.detail == "inside"
                    else TerminationReason.USER_ABORTED
                )
                self._terminate(s, reason, t)

    def _chord(self, t: int) -> None:
        # Power+volume-down: system-owned screenshot with hardware-level
        # consent; the capture completes on the next tick.
        self.gestures.create_system_binding(t)
        self.submit_request(
            SYSTEM_APP_ID, OperationKind.CAPTURE_SCREENSHOT, DeviceId.SCREEN_BUFFER
        )

    def _binding_terminal(self, b: PendingOperation, t: int) -> None:
        """Common cleanup once a binding aborts or expires."""
        self.display.remove_pending(b.binding_id, t)
        parked = self._parked.pop(b.binding_id, None)
        if parked is not None:
            self._resolve_denied(parked, b, t)
        elif b.detail == "slide-out":
            # an explicit user denial is logged even when the app never
            # got around to sending its request
            self._log(t, LogCategory.DENIED, b.app_id, b.op, b.device, "slide-out")

    def _resolve_denied(self, parked: _Parked, b: PendingOperation, t: int) -> None:
        t1 = perf_counter_ns()
        req = parked.req
        rules = {
            RuleId.P1: True, RuleId.P2: True,
            RuleId.P3: b.displayed, RuleId.P4: False,
        }
        unsat = [RuleId.P4] if b.displayed else [RuleId.P3, RuleId.P4]
        self._log(
            t, LogCategory.DENIED, b.app_id, req.op, req.device,
            f"{b.detail} r{req.request_id}",
        )
        self._record_decision(
            req, MediationStage.USER_DENIED, rules, unsat, t,
            parked.arrival_ns + (perf_counter_ns() - t1),
            binding_id=b.binding_id, detail=b.detail,
        )

    # ------------------------------------------------------------- requests

    def submit_request(
        self,
        app_id: str,
        op: OperationKind,
        device: DeviceId,
        via_intent_from: Optional[str] = None,
    ) -> int:
        """Mediation entry point: conventional checks, then the engine."""
        t = self.clock.now_ms
        t0 = perf_counter_ns()
        app = self.world.require(app_id)
        if not compatible_device(op, device):
            raise SimulationError(f"{device.value} cannot serve {op.value}")
        self._request_counter += 1
        rid = self._request_counter
        self.hooks.emit(
            HookKind.REQUEST_ARRIVED, t, request_id=rid, app_id=app_id,
            op=op.value, device=device.value,
        )
        req = AccessRequest(
            rid, app_id, SERVICE_FOR_OP[op], op, device, t, via_intent_from
        )
        perm = check_permissions(app, op)
        if not perm.granted:
            self._record_decision(
                req, MediationStage.CONVENTIONAL_DENIED, None, [], t,
                perf_counter_ns() - t0,
                missing=sorted(p.value for p in perm.missing),
            )
            return rid
        self._decide(req, t, t0)
        return rid

    def _decide(self, req: AccessRequest, t: int, t0: int) -> None:
        charged = self.world.require(req.charged_app_id)
        if charged.gesture_mode.kind is GestureModeKind.EXEMPT:
            rules = {r: True for r in (RuleId.P1, RuleId.P2, RuleId.P3, RuleId.P4)}
            self._grant(req, None, t, perf_counter_ns() - t0, rules, exempt=True)
            return
        b = self.gestures.current_binding(charged.app_id)
        matches = b is not None and b.op is req.op and b.device is req.device
        if (
            b is None
            or not matches
            or b.phase in (BindingPhase.ABORTED, BindingPhase.EXPIRED)
        ):
            rules = {
                RuleId.P1: False, RuleId.P2: True,
                RuleId.P3: True, RuleId.P4: False,
            }
            self._block(req, rules, [RuleId.P1, RuleId.P4], t, t0)
            return
        if b.phase is BindingPhase.CONFIRMED:
            # one binding authorizes exactly one request; later matches lose
            rules = {
                RuleId.P1: True, RuleId.P2: True,
                RuleId.P3: b.displayed, RuleId.P4: False,
            }
            self._block(req, rules, [RuleId.P4], t, t0,
                        binding_id=b.binding_id, detail="binding-consumed")
            return
        if b.phase is BindingPhase.AWAITING_REQUEST:
            self.gestures.mark_confirmed(b, t, req.request_id)
            self.display.remove_pending(b.binding_id, t)
            rules = {
                RuleId.P1: True, RuleId.P2: True,
                RuleId.P3: b.displayed, RuleId.P4: True,
            }
            self._grant(req, b, t, perf_counter_ns() - t0, rules)
            return
        # binding still held
        if b.binding_id in self._parked:
            rules = {
                RuleId.P1: True, RuleId.P2: True,
                RuleId.P3: b.displayed, RuleId.P4: False,
            }
            self._block(req, rules, [RuleId.P4], t, t0,
                        binding_id=b.binding_id, detail="binding-busy")
            return
        if (
            b.confirm_mode is ConfirmMode.HOLD_TO_SUSTAIN
            and b.displayed
            and not self.display.suppressed
        ):
            # sustained hold approves; the release will end the session
            self.gestures.mark_confirmed(b, t, req.request_id)
            self.display.remove_pending(b.binding_id, t)
            rules = {r: True for r in (RuleId.P1, RuleId.P2, RuleId.P3, RuleId.P4)}
            sid = self._grant(req, b, t, perf_counter_ns() - t0, rules)
            if sid is not None:
                self._hold_links[b.binding_id] = sid
            return
        # wait for the user's confirm gesture
        self._parked[b.binding_id] = _Parked(req, perf_counter_ns() - t0)

    def _block(self, req, rules, unsat, t, t0, binding_id=None, detail=None) -> None:
        charged_id = req.charged_app_id
        self._log(
            t, LogCategory.BLOCKED, charged_id, req.op, req.device,
            "unsatisfied " + ",".join(r.value for r in unsat) + f" r{req.request_id}",
        )
        self._violation_alert(charged_id, req.op, req.device, req.request_id, t)
        self._record_decision(
            req, MediationStage.MONITOR_BLOCKED, rules, unsat, t,
            perf_counter_ns() - t0, binding_id=binding_id, detail=detail,
        )

    def _grant(self, req, binding, t, latency_ns, rules, exempt=False) -> Optional[int]:
        self._session_counter += 1
        sid = self._session_counter
        charged_id = req.charged_app_id
        devs = devices_for(req.op, req.device)
        s = AuthorizedSession(
            session_id=sid,
            app_id=charged_id,
            requester_app_id=req.app_id,
            op=req.op,
            device=req.device,
            devices=devs,
            binding_id=binding.binding_id if binding else None,
            exempt=exempt,
            started_t=t,
        )
        self.sessions[sid] = s
        if self._log(
            t, LogCategory.AUTHORIZED, charged_id, req.op, req.device,
            f"session s{sid} r{req.request_id}",
        ):
            self._authorized_logged.add(sid)
        acquired: list[DeviceId] = []
        busy_holder: Optional[int] = None
        for d in devs:
            holder = self.world.devices.acquire(d, sid)
            if holder is not None:
                busy_holder = holder
                break
            acquired.append(d)
        if busy_holder is not None:
            # authorization stood, but the operation cannot start
            for d in acquired:
                self.world.devices.release(d, sid)
            s.devices = ()
            s.active = False
            s.reason = TerminationReason.DEVICE_BUSY
            s.ended_t = t
            s.e2_logged = self._log(
                t, LogCategory.TERMINATED, charged_id, req.op, req.device,
                f"session s{sid} DeviceBusy held-by-s{busy_holder}",
            )
            s.e3_visible = not self.display.suppressed
            self._record_decision(
                req, MediationStage.GRANTED, rules, [], t, latency_ns,
                session_id=sid,
                binding_id=binding.binding_id if binding else None,
                detail="device-busy",
            )
            return None
        s.last_read_t = t
        self.hooks.emit(HookKind.SENSOR_READ, t, session_id=sid,
                        device=req.device.value)
        self.display.add_ongoing(
            SecurityMessage(
                MessageKind.ONGOING, charged_id, self._display_name(charged_id),
                req.op, req.device, sid,
            ),
            t,
        )
        self._record_decision(
            req, MediationStage.GRANTED, rules, [], t, latency_ns,
            session_id=sid,
            binding_id=binding.binding_id if binding else None,
        )
        if binding is not None and binding.system:
            self._completion_seq += 1
            heapq.heappush(self._completions, (t + 1, self._completion_seq, sid))
        return sid

    # ----------------------------------------------------------- termination

    def app_release(self, app_id: str) -> None:
        """The requesting app finishes its operation and releases resources."""
        t = self.clock.now_ms
        for s in list(self.sessions.values()):
            if s.active and s.requester_app_id == app_id:
                self._terminate(s, TerminationReason.APP_RELEASED, t)

    def _terminate(
        self,
        s: AuthorizedSession,
        reason: TerminationReason,
        t: int,
        detail: Optional[str] = None,
    ) -> None:
        if not s.active:
            raise AlreadyTerminatedError(s.session_id)
        s.active = False
        s.reason = reason
        s.ended_t = t
        for d in s.devices:
            self.world.devices.release(d, s.session_id)
        extra = f" {detail}" if detail else ""
        s.e2_logged = self._log(
            t, LogCategory.TERMINATED, s.app_id, s.op, s.device,
            f"session s{s.session_id} {reason.value}{extra}",
        )
        self.display.remove_ongoing(s.session_id, t)
        s.e3_visible = not self.display.suppressed
        if s.binding_id is not None:
            self._hold_links.pop(s.binding_id, None)

    def terminate_session(self, session_id: int, reason: TerminationReason) -> None:
        s = self.sessions.get(session_id)
        if s is None:
            raise SimulationError(f"no session {session_id}")
        self._terminate(s, reason, self.clock.now_ms)

    # ----------------------------------------------------------- retro actions

    def apply_retro_action(self, action: RetroAction) -> None:
        t = self.clock.now_ms
        app = self.world.require(action.app_id)
        detail = action.kind.value
        if action.permission is not None:
            detail += f":{action.permission.value}"
        self._log(t, LogCategory.RETRO, action.app_id, None, None, detail)
        if action.kind is RetroActionKind.UNINSTALL:
            for s in list(self.sessions.values()):
                if s.active and action.app_id in (s.app_id, s.requester_app_id):
                    self._terminate(s, TerminationReason.RETRO_REVOKED, t)
            b = self.gestures.live_binding(action.app_id)
            if b is not None:
                self.gestures.mark_expired(b, t, "uninstalled")
                self._binding_terminal(b, t)
            self.world.uninstall(action.app_id)
        else:
            app.granted_permissions.discard(action.permission)
            for s in list(self.sessions.values()):
                if (
                    s.active
                    and action.app_id in (s.app_id, s.requester_app_id)
                    and action.permission in required_permissions(s.op)
                ):
                    self._terminate(s, TerminationReason.RETRO_REVOKED, t)

    # ----------------------------------------------------------------- output

    def active_sessions(self) -> list[AuthorizedSession]:
        return [s for s in self.sessions.values() if s.active]

    def state_fingerprint(self) -> tuple:
        return (
            len(self.log),
            len(self.decisions),
            len(self.display.timeline),
            len(self.sounds),
            self._session_counter,
            len(self.active_sessions()),
            tuple((b.binding_id, b.phase.value) for b in self.gestures.live_bindings()),
        )

    def build_report(self, events: int = 0) -> dict:
        stage_counts = {s.value: 0 for s in MediationStage}
        for d in self.decisions:
            stage_counts[d["stage"]] += 1
        log_counts = {c.value: self.log.count(c) for c in LogCategory}
        summary = {
            "events": events,
            "requests": self._request_counter,
            "conventional_denied": stage_counts["ConventionalDenied"],
            "monitor_blocked": stage_counts["MonitorBlocked"],
            "user_denied": stage_counts["UserDenied"],
            "granted": stage_counts["Granted"],
            "sessions": self._session_counter,
            "sound_events": len(self.sounds),
            "log": log_counts,
            "end_t_ms": self.clock.now_ms,
        }
        return {
            "config": self.config.as_dict(),
            "summary": summary,
            "decisions": list(self.decisions),
            "sessions": [s.as_dict() for s in self.sessions.values()],
            "bindings": [b.as_dict() for b in self.gestures.all_bindings],
            "log": [e.as_dict() for e in self.log.entries()],
            "timeline": list(self.display.timeline),
            "sounds": list(self.sounds),
            "hooks": list(self.hooks.events),
            "hook_counts": dict(self.hooks.counts),
            "forgeries": list(self.display.forgeries),
        }

    # -------------------------------------------------------------- internals

    def _display_name(self, app_id: str) -> str:
        app = self.world.apps.get(app_id)
        return app.display_name if app else app_id

    def _log(self, t, category, app_id, op, device, detail) -> bool:
        if self._skip_log:
            return False
        self.log.append(t, category, app_id, op, device, detail)
        return True

    def _violation_alert(self, app_id, op, device, ref, t) -> None:
        self.sounds.append(
            {"t_ms": t, "app_id": app_id, "op": op.value, "device": device.value}
        )
        self.display.post_violation(
            SecurityMessage(
                MessageKind.VIOLATION, app_id, self._display_name(app_id),
                op, device, ref,
            ),
            t,
        )

    def _on_device_event(self, kind: str, device: DeviceId, session_id: int) -> None:
        hook = HookKind.DEVICE_ACQUIRED if kind == "acquire" else HookKind.DEVICE_RELEASED
        self.hooks.emit(hook, self.clock.now_ms, device=device.value,
                        session_id=session_id)

    def _record_decision(
        self, req, stage, rules, unsat, t_resolved, latency_ns,
        session_id=None, binding_id=None, detail=None, missing=None,
    ) -> None:
        self.decisions.append(
            {
                "request_id": req.request_id,
                "t_arrived": req.t,
                "t_resolved": t_resolved,
                "app_id": req.app_id,
                "charged_app_id": req.charged_app_id,
                "service": req.service.value,
                "op": req.op.value,
                "device": req.device.value,
                "via_intent_from": req.via_intent_from,
                "stage": stage.value,
                "rules": {r.value: v for r, v in rules.items()} if rules else None,
                "unsatisfied": [r.value for r in unsat],
                "missing_permissions": missing,
                "session_id": session_id,
                "binding_id": binding_id,
                "detail": detail,
                "latency_ns": latency_ns,
            }
        )
