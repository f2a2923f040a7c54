"""Append-only audit log of blocked, denied, authorized and terminated
operations, plus user-initiated retrospective actions."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Optional

from .world import DeviceId, OperationKind, Permission


class LogCategory(str, Enum):
    BLOCKED = "Blocked"
    DENIED = "Denied"
    AUTHORIZED = "Authorized"
    TERMINATED = "Terminated"
    RETRO = "Retro"


@dataclass(frozen=True)
class LogEntry:
    seq: int
    t_ms: int
    category: LogCategory
    app_id: str
    op: Optional[OperationKind]
    device: Optional[DeviceId]
    detail: str

    def as_dict(self) -> dict:
        return {
            "seq": self.seq,
            "t_ms": self.t_ms,
            "category": self.category.value,
            "app_id": self.app_id,
            "op": self.op.value if self.op else None,
            "device": self.device.value if self.device else None,
            "detail": self.detail,
        }


class RetroActionKind(str, Enum):
    UNINSTALL = "Uninstall"
    REVOKE_PERMISSION = "RevokePermission"


@dataclass(frozen=True)
class RetroAction:
    kind: RetroActionKind
    app_id: str
    permission: Optional[Permission] = None


def iso_time(t_ms: int) -> str:
    """Virtual milliseconds rendered as a fixed-epoch ISO timestamp."""
    dt = datetime.fromtimestamp(t_ms / 1000.0, tz=timezone.utc)
    return dt.isoformat(timespec="milliseconds").replace("+00:00", "Z")


class AccessLog:
    """Gapless, append-only sequence of log entries.

    The API deliberately exposes no mutation beyond append; query and export
    read immutable snapshots.
    """

    def __init__(self):
        self._entries: list[LogEntry] = []

    def append(
        self,
        t_ms: int,
        category: LogCategory,
        app_id: str,
        op: Optional[OperationKind],
        device: Optional[DeviceId],
        detail: str,
    ) -> int:
        seq = len(self._entries) + 1
        self._entries.append(LogEntry(seq, t_ms, category, app_id, op, device, detail))
        return seq

    def entries(self) -> tuple[LogEntry, ...]:
        return tuple(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def count(self, category: LogCategory) -> int:
        return sum(1 for e in self._entries if e.category is category)

    def query(
        self,
        app_id: Optional[str] = None,
        category: Optional[LogCategory] = None,
        t_from: Optional[int] = None,
        t_to: Optional[int] = None,
    ) -> list[LogEntry]:
        """Entries matching every given filter, in sequence order."""
        out = []
        for e in self._entries:
            if app_id is not None and e.app_id != app_id:
                continue
            if category is not None and e.category is not category:
                continue
            if t_from is not None and e.t_ms < t_from:
                continue
            if t_to is not None and e.t_ms > t_to:
                continue
            out.append(e)
        return out

    def export_lines(self, entries: Optional[Iterable[LogEntry]] = None) -> list[str]:
        """Stable line format: seq|iso-time|category|app_id|op|device|detail."""
        rows = self._entries if entries is None else list(entries)
        return [
            "|".join(
                [
                    str(e.seq),
                    iso_time(e.t_ms),
                    e.category.value,
                    e.app_id,
                    e.op.value if e.op else "-",
                    e.device.value if e.device else "-",
                    e.detail,
                ]
            )
            for e in rows
        ]
