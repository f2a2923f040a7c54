"""Interception layer types: access requests, hook events and outcomes.

Every app request and every device/input state change is funneled through
a single ordered hook stream, which is what makes mediation complete: a
grant can only exist for a request that arrived through a hook.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .world import DeviceId, OperationKind, SystemServiceId


class HookKind(str, Enum):
    REQUEST_ARRIVED = "RequestArrived"
    DEVICE_ACQUIRED = "DeviceAcquired"
    DEVICE_RELEASED = "DeviceReleased"
    INPUT_EVENT = "InputEvent"
    SENSOR_READ = "SensorRead"


@dataclass(frozen=True)
class AccessRequest:
    request_id: int
    app_id: str
    service: SystemServiceId
    op: OperationKind
    device: DeviceId
    t: int
    via_intent_from: Optional[str] = None

    @property
    def charged_app_id(self) -> str:
        """App whose consent gates this request: the originator when the
        request was relayed through an intent, else the requester itself."""
        return self.via_intent_from or self.app_id


class MediationStage(str, Enum):
    CONVENTIONAL_DENIED = "ConventionalDenied"
    MONITOR_BLOCKED = "MonitorBlocked"
    USER_DENIED = "UserDenied"
    GRANTED = "Granted"


class HookStream:
    """Ordered stream of hook events; order equals emission order."""

    def __init__(self, record: bool = True):
        self._record = record
        self.events: list[dict] = []
        self.counts: dict[str, int] = {k.value: 0 for k in HookKind}

    def emit(self, kind: HookKind, t: int, **detail) -> None:
        self.counts[kind.value] += 1
        if self._record:
            self.events.append({"n": len(self.events) + 1, "t_ms": t,
                                "kind": kind.value, **detail})
