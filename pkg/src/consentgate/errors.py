"""Exception types shared across the simulator."""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all simulator errors."""


class UnknownAppError(SimulationError):
    def __init__(self, app_id: str):
        super().__init__(f"unknown app: {app_id!r}")
        self.app_id = app_id


class NotHolderError(SimulationError):
    def __init__(self, device: str, session_id: int):
        super().__init__(f"session {session_id} does not hold {device}")
        self.device = device
        self.session_id = session_id


class AlreadyTerminatedError(SimulationError):
    def __init__(self, session_id: int):
        super().__init__(f"session {session_id} already terminated")
        self.session_id = session_id


class MalformedTraceError(SimulationError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"malformed trace at line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnknownScenarioError(SimulationError):
    def __init__(self, name: str):
        super().__init__(f"unknown scenario: {name!r}")
        self.name = name
