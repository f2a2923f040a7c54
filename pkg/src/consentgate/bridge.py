"""Live bridge: newline-delimited JSON messages over a TCP socket.

While serving, the virtual clock tracks wall time at millisecond
granularity and a human (or scripted client) supplies the gestures.
Client messages are injected into the engine queue stamped with the
current virtual time; a state snapshot is pushed after every applied
message and whenever background activity changes engine state, carrying a
monotone revision number. Interactive apps react to presses on their own
buttons by filing the request their button is actually wired to, which is
what makes hijack mismatches observable live.
"""

from __future__ import annotations

import heapq
import json
import socket
import threading
import time
from typing import Optional

from . import scenarios
from .audit import RetroAction, RetroActionKind
from .engine import Engine, EngineConfig
from .errors import SimulationError
from .gestures import GestureEvent, GestureEventKind
from .harness import dispatch_event
from .world import Permission

PROTOCOL_VERSION = 1

_POINTER_KINDS = {
    "down": GestureEventKind.POINTER_DOWN,
    "move": GestureEventKind.POINTER_MOVE,
    "up": GestureEventKind.POINTER_UP,
}


class BridgeServer:
    """Single-client-at-a-time acceptor serialized against the engine loop."""

    def __init__(
        self,
        world_name: str = "interactive",
        host: str = "127.0.0.1",
        port: int = 0,
        config: Optional[EngineConfig] = None,
        tick_ms: int = 5,
    ):
        self._config = config or EngineConfig()
        self._lock = threading.RLock()
        self._tick_s = tick_ms / 1000.0
        self._revision = 0
        self._clients: list[socket.socket] = []
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._load_world(world_name)
        self._sock = socket.create_server((host, port))
        self.host, self.port = self._sock.getsockname()[:2]

    # ------------------------------------------------------------- lifecycle

    def start(self) -> None:
        for fn in (self._accept_loop, self._tick_loop):
            th = threading.Thread(target=fn, daemon=True)
            th.start()
            self._threads.append(th)

    def wait(self) -> None:
        while not self._stop.is_set():
            time.sleep(0.2)

    def stop(self) -> None:
        self._stop.set()
        try:
            self._sock.close()
        except OSError:
            pass
        with self._lock:
            for c in self._clients:
                try:
                    c.close()
                except OSError:
                    pass
            self._clients.clear()

    # ------------------------------------------------------------- the world

    def _load_world(self, name: str) -> None:
        world = scenarios.interactive_world(name)
        engine = Engine(self._config)
        for ev in world.events:
            engine.advance_to(ev.t_ms)
            dispatch_event(engine, ev)
            engine.settle(ev.t_ms)
        self._engine = engine
        self._world_name = name
        self._reactions = world.reactions
        self._wall_base = time.monotonic()
        self._virtual_base = engine.clock.now_ms
        self._actions: list[tuple[int, int, tuple]] = []
        self._action_seq = 0
        self._fingerprint = None
        for p in world.periodic:
            self._schedule(
                self._virtual_base + p.period_ms,
                ("periodic", p.app_id, p.op, p.device, p.period_ms),
            )

    def _now_virtual(self) -> int:
        return self._virtual_base + int((time.monotonic() - self._wall_base) * 1000)

    def _schedule(self, t: int, action: tuple) -> None:
        self._action_seq += 1
        heapq.heappush(self._actions, (t, self._action_seq, action))

    def _run_actions(self, up_to: int) -> None:
        while self._actions and self._actions[0][0] <= up_to:
            t, _, action = heapq.heappop(self._actions)
            self._engine.advance_to(max(t, self._engine.clock.now_ms))
            kind = action[0]
            if kind == "request":
                _, app_id, op, device = action
                if app_id in self._engine.world.apps:
                    self._engine.submit_request(app_id, op, device)
            elif kind == "release":
                _, app_id = action
                if app_id in self._engine.world.apps:
                    self._engine.app_release(app_id)
            elif kind == "periodic":
                _, app_id, op, device, period = action
                if app_id in self._engine.world.apps:
                    self._engine.submit_request(app_id, op, device)
                    self._schedule(t + period, action)

    # ------------------------------------------------------------- threads

    def _tick_loop(self) -> None:
        while not self._stop.is_set():
            time.sleep(self._tick_s)
            with self._lock:
                t = self._now_virtual()
                self._run_actions(t)
                self._engine.advance_to(t)
                self._engine.settle(t)
                fp = self._engine.state_fingerprint()
                if fp != self._fingerprint:
                    self._fingerprint = fp
                    self._push_snapshot()

    def _accept_loop(self) -> None:
        while not self._stop.is_set():
            try:
                conn, _ = self._sock.accept()
            except OSError:
                return
            with self._lock:
                self._clients.append(conn)
                self._push_snapshot(only=conn)
            th = threading.Thread(target=self._client_loop, args=(conn,), daemon=True)
            th.start()

    def _client_loop(self, conn: socket.socket) -> None:
        buf = b""
        try:
            while not self._stop.is_set():
                chunk = conn.recv(4096)
                if not chunk:
                    break
                buf += chunk
                while b"\n" in buf:
                    line, buf = buf.split(b"\n", 1)
                    if line.strip():
                        self._handle_line(conn, line)
        except OSError:
            pass
        finally:
            with self._lock:
                if conn in self._clients:
                    self._clients.remove(conn)
            try:
                conn.close()
            except OSError:
                pass

    # ------------------------------------------------------------- protocol

    def _send(self, conn: socket.socket, msg: dict) -> None:
        try:
            conn.sendall((json.dumps(msg) + "\n").encode("utf-8"))
        except OSError:
            pass

    def _handle_line(self, conn: socket.socket, line: bytes) -> None:
        try:
            msg = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            self._send(conn, {"v": PROTOCOL_VERSION, "kind": "error",
                              "error": "invalid JSON"})
            return
        with self._lock:
            try:
                self._apply(msg)
            except (SimulationError, KeyError, ValueError) as e:
                self._send(conn, {"v": PROTOCOL_VERSION, "kind": "error",
                                  "error": str(e)})
            self._fingerprint = self._engine.state_fingerprint()
            self._push_snapshot()

    def _apply(self, msg: dict) -> None:
        kind = msg.get("kind")
        t = self._now_virtual()
        self._run_actions(t)
        self._engine.advance_to(t)
        if kind == "pointer":
            gk = _POINTER_KINDS[msg["pointer_kind"]]
            button_id = msg.get("button_id")
            self._engine.gesture(
                GestureEvent(gk, t, button_id=button_id, inside=msg.get("inside"))
            )
            if gk is GestureEventKind.POINTER_DOWN and button_id:
                self._schedule_reaction(button_id, t)
        elif kind == "fingerprint":
            self._engine.gesture(GestureEvent(GestureEventKind.FINGERPRINT_SCAN, t))
        elif kind == "chord":
            self._engine.gesture(GestureEvent(GestureEventKind.PHYSICAL_CHORD, t))
        elif kind == "select_scenario":
            self._load_world(msg["name"])
        elif kind == "retro":
            action = msg["action"]
            self._engine.apply_retro_action(
                RetroAction(
                    kind=RetroActionKind(action["kind"]),
                    app_id=action["app_id"],
                    permission=Permission(action["permission"])
                    if action.get("permission")
                    else None,
                )
            )
        else:
            raise ValueError(f"unknown message kind {kind!r}")
        self._engine.settle(self._engine.clock.now_ms)

    def _schedule_reaction(self, button_id: str, t: int) -> None:
        fg = self._engine.world.foreground()
        if fg is None:
            return
        reaction = self._reactions.get((fg.app_id, button_id))
        if reaction is None:
            return
        req_t = t + reaction.request_delay_ms
        self._schedule(req_t, ("request", fg.app_id, reaction.op, reaction.device))
        if reaction.release_after_ms is not None:
            self._schedule(
                req_t + reaction.release_after_ms, ("release", fg.app_id)
            )

    def _snapshot(self) -> dict:
        e = self._engine
        bar = e.display
        cur = bar.current_message()
        fg = e.world.foreground()
        log_entries = e.log.entries()
        return {
            "v": PROTOCOL_VERSION,
            "kind": "snapshot",
            "revision": self._revision,
            "world": self._world_name,
            "t_ms": e.clock.now_ms,
            "status_bar": {
                "visible": bar.visible(),
                "screen_mode": bar.screen_mode.value,
                "current": cur.as_dict() if cur else None,
                "rotation": [m.as_dict() for m in bar.rotation_messages()],
            },
            "foreground_app": None
            if fg is None
            else {
                "app_id": fg.app_id,
                "display_name": fg.display_name,
                "buttons": [
                    {
                        "button_id": b.button_id,
                        "label_text": b.label_text,
                        "confirm_mode": b.confirm_mode.value,
                    }
                    for b in fg.soft_buttons
                ],
            },
            "active_sessions": [s.as_dict() for s in e.active_sessions()],
            "recent_log": [x.as_dict() for x in log_entries[-8:]],
            "counts": {
                "blocked": sum(1 for x in log_entries if x.category.value == "Blocked"),
                "denied": sum(1 for x in log_entries if x.category.value == "Denied"),
                "authorized": sum(
                    1 for x in log_entries if x.category.value == "Authorized"
                ),
                "terminated": sum(
                    1 for x in log_entries if x.category.value == "Terminated"
                ),
            },
            "sound_events": len(e.sounds),
        }

    def _push_snapshot(self, only: Optional[socket.socket] = None) -> None:
        self._revision += 1
        data = (json.dumps(self._snapshot()) + "\n").encode("utf-8")
        targets = [only] if only is not None else list(self._clients)
        for c in targets:
            try:
                c.sendall(data)
            except OSError:
                if c in self._clients:
                    self._clients.remove(c)


def serve(port: int, world: str = "interactive",
          config: Optional[EngineConfig] = None,
          host: str = "127.0.0.1") -> BridgeServer:
    """Start a bridge server; returns the running server."""
    server = BridgeServer(world_name=world, host=host, port=port, config=config)
    server.start()
    return server
