"""Simulated phone world: apps, permissions, system services and I/O devices.

Devices are exclusive resources; at every instant each device has at most
one holding session. Permission checking mirrors the install-time grant
model: an operation proceeds past the conventional check when its required
permission set is a subset of the app's grants. Screen-buffer operations
carry no device permission of their own, only the storage permission, so
the device-access part of their check never blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .errors import NotHolderError, UnknownAppError


class DeviceId(str, Enum):
    FRONT_CAMERA = "FrontCamera"
    BACK_CAMERA = "BackCamera"
    MICROPHONE = "Microphone"
    SCREEN_BUFFER = "ScreenBuffer"


CAMERAS = frozenset({DeviceId.FRONT_CAMERA, DeviceId.BACK_CAMERA})


class OperationKind(str, Enum):
    TAKE_PHOTO = "TakePhoto"
    RECORD_VIDEO = "RecordVideo"
    RECORD_AUDIO = "RecordAudio"
    CAPTURE_SCREENSHOT = "CaptureScreenshot"
    RECORD_SCREEN = "RecordScreen"


# Operations that keep delivering device data until the session ends, as
# opposed to one-shot captures.
CONTINUOUS_OPS = frozenset(
    {
        OperationKind.RECORD_VIDEO,
        OperationKind.RECORD_AUDIO,
        OperationKind.RECORD_SCREEN,
    }
)


class Permission(str, Enum):
    CAMERA = "CAMERA"
    RECORD_AUDIO = "RECORD_AUDIO"
    WRITE_EXTERNAL_STORAGE = "WRITE_EXTERNAL_STORAGE"
    INTERNET = "INTERNET"


class ProtectionLevel(str, Enum):
    DANGEROUS = "Dangerous"
    NORMAL = "Normal"


# All four permissions involved in stealthy device misuse are dangerous-level.
PROTECTION_LEVELS: dict[Permission, ProtectionLevel] = {
    p: ProtectionLevel.DANGEROUS for p in Permission
}


class SystemServiceId(str, Enum):
    MEDIA_SERVICE = "MediaService"
    AUDIO_SERVICE = "AudioService"
    SCREEN_SERVICE = "ScreenService"
    INPUT_SERVICE = "InputService"
    DISPLAY_SERVICE = "DisplayService"


# Every request is routed through exactly one service, fixed by operation.
SERVICE_FOR_OP: dict[OperationKind, SystemServiceId] = {
    OperationKind.TAKE_PHOTO: SystemServiceId.MEDIA_SERVICE,
    OperationKind.RECORD_VIDEO: SystemServiceId.MEDIA_SERVICE,
    OperationKind.RECORD_AUDIO: SystemServiceId.AUDIO_SERVICE,
    OperationKind.CAPTURE_SCREENSHOT: SystemServiceId.SCREEN_SERVICE,
    OperationKind.RECORD_SCREEN: SystemServiceId.SCREEN_SERVICE,
}

_REQUIRED_PERMISSIONS: dict[OperationKind, frozenset[Permission]] = {
    OperationKind.TAKE_PHOTO: frozenset(
        {Permission.CAMERA, Permission.WRITE_EXTERNAL_STORAGE}
    ),
    OperationKind.RECORD_VIDEO: frozenset(
        {Permission.RECORD_AUDIO, Permission.CAMERA, Permission.WRITE_EXTERNAL_STORAGE}
    ),
    OperationKind.RECORD_AUDIO: frozenset(
        {Permission.RECORD_AUDIO, Permission.WRITE_EXTERNAL_STORAGE}
    ),
    OperationKind.CAPTURE_SCREENSHOT: frozenset({Permission.WRITE_EXTERNAL_STORAGE}),
    OperationKind.RECORD_SCREEN: frozenset({Permission.WRITE_EXTERNAL_STORAGE}),
}


def required_permissions(op: OperationKind) -> frozenset[Permission]:
    """Permission set an app must hold before the conventional check passes."""
    return _REQUIRED_PERMISSIONS[op]


def classify_stealth_capabilities(perms: set[Permission]) -> set[OperationKind]:
    """Operations an app could perform stealthily given a permission grant set.

    An operation qualifies when its whole required permission set is covered,
    which is exactly the could-behave-as-spyware classifier.
    """
    granted = frozenset(perms)
    return {op for op, req in _REQUIRED_PERMISSIONS.items() if req <= granted}


def compatible_device(op: OperationKind, device: DeviceId) -> bool:
    """Whether a request naming this (operation, device) pair is well formed."""
    if op in (OperationKind.TAKE_PHOTO, OperationKind.RECORD_VIDEO):
        return device in CAMERAS
    if op is OperationKind.RECORD_AUDIO:
        return device is DeviceId.MICROPHONE
    return device is DeviceId.SCREEN_BUFFER


def devices_for(op: OperationKind, device: DeviceId) -> tuple[DeviceId, ...]:
    """Full device set an operation occupies, given its primary device.

    Video occupies the named camera plus the microphone; every other
    operation occupies exactly its primary device.
    """
    if not compatible_device(op, device):
        raise ValueError(f"{device.value} cannot serve {op.value}")
    if op is OperationKind.RECORD_VIDEO:
        return (device, DeviceId.MICROPHONE)
    return (device,)


class ConfirmMode(str, Enum):
    RELEASE_TO_CONFIRM = "ReleaseToConfirm"
    HOLD_TO_SUSTAIN = "HoldToSustain"


@dataclass
class SoftButton:
    """App-drawn control. The label is untrusted and never describes the
    operation to the user; the declared pair is what the app has actually
    wired the button to request."""

    button_id: str
    label_text: str
    declared_op: OperationKind
    declared_device: DeviceId
    confirm_mode: ConfirmMode = ConfirmMode.RELEASE_TO_CONFIRM


class Lifecycle(str, Enum):
    FOREGROUND = "Foreground"
    BACKGROUND = "Background"
    NOT_RUNNING = "NotRunning"


class GestureModeKind(str, Enum):
    STANDARD = "Standard"
    FINGERPRINT_CONFIRM = "FingerprintConfirm"
    EXEMPT = "Exempt"


class ExemptReason(str, Enum):
    USER_WHITELISTED = "UserWhitelisted"
    REMOTE_CONTROLLER = "RemoteController"


@dataclass(frozen=True)
class GestureMode:
    kind: GestureModeKind
    exempt_reason: Optional[ExemptReason] = None


STANDARD_MODE = GestureMode(GestureModeKind.STANDARD)
FINGERPRINT_MODE = GestureMode(GestureModeKind.FINGERPRINT_CONFIRM)


@dataclass
class AppDescriptor:
    app_id: str
    display_name: str
    granted_permissions: set[Permission] = field(default_factory=set)
    soft_buttons: list[SoftButton] = field(default_factory=list)
    lifecycle: Lifecycle = Lifecycle.BACKGROUND
    gesture_mode: GestureMode = STANDARD_MODE

    def button(self, button_id: str) -> Optional[SoftButton]:
        for b in self.soft_buttons:
            if b.button_id == button_id:
                return b
        return None


@dataclass(frozen=True)
class PermissionDecision:
    granted: bool
    missing: frozenset[Permission]


def check_permissions(app: AppDescriptor, op: OperationKind) -> PermissionDecision:
    """Conventional install-time permission check."""
    missing = required_permissions(op) - app.granted_permissions
    return PermissionDecision(granted=not missing, missing=frozenset(missing))


class DeviceTable:
    """Exclusive holder bookkeeping for the four I/O devices.

    Acquisition and release both invoke the hook callback so the engine can
    observe resource turnover (release feeds session-exit detection).
    """

    def __init__(self, on_event: Optional[Callable[[str, DeviceId, int], None]] = None):
        self._holders: dict[DeviceId, Optional[int]] = {d: None for d in DeviceId}
        self._on_event = on_event

    def holder(self, device: DeviceId) -> Optional[int]:
        return self._holders[device]

    def acquire(self, device: DeviceId, session_id: int) -> Optional[int]:
        """Returns None when acquired, else the session id currently holding."""
        current = self._holders[device]
        if current is not None:
            return current
        self._holders[device] = session_id
        if self._on_event:
            self._on_event("acquire", device, session_id)
        return None

    def release(self, device: DeviceId, session_id: int) -> None:
        if self._holders[device] != session_id:
            raise NotHolderError(device.value, session_id)
        self._holders[device] = None
        if self._on_event:
            self._on_event("release", device, session_id)


SYSTEM_APP_ID = "system"


def system_app() -> AppDescriptor:
    return AppDescriptor(
        app_id=SYSTEM_APP_ID,
        display_name="System",
        granted_permissions=set(Permission),
        lifecycle=Lifecycle.BACKGROUND,
    )


class World:
    """Installed apps plus the device table; at most one app is foreground."""

    def __init__(self, on_device_event=None):
        self.apps: dict[str, AppDescriptor] = {}
        self.devices = DeviceTable(on_event=on_device_event)
        self.foreground_app_id: Optional[str] = None
        self.install(system_app())

    def install(self, app: AppDescriptor) -> None:
        # Reinstalling an existing id replaces its descriptor, which is also
        # how a trace re-grants previously revoked permissions.
        self.apps[app.app_id] = app

    def uninstall(self, app_id: str) -> None:
        self.require(app_id)
        del self.apps[app_id]
        if self.foreground_app_id == app_id:
            self.foreground_app_id = None

    def set_foreground(self, app_id: str) -> None:
        app = self.require(app_id)
        if self.foreground_app_id and self.foreground_app_id in self.apps:
            self.apps[self.foreground_app_id].lifecycle = Lifecycle.BACKGROUND
        app.lifecycle = Lifecycle.FOREGROUND
        self.foreground_app_id = app_id

    def foreground(self) -> Optional[AppDescriptor]:
        if self.foreground_app_id is None:
            return None
        return self.apps.get(self.foreground_app_id)

    def require(self, app_id: str) -> AppDescriptor:
        try:
            return self.apps[app_id]
        except KeyError:
            raise UnknownAppError(app_id) from None
