"""Deterministic phone-world simulator with a gesture-bound I/O access
monitor: device operations are authorized only when tied to an explicit
user gesture, sessions stay visible while they run, and everything is
audit-logged."""

from .engine import Engine, EngineConfig, FaultKind, TerminationReason
from .harness import (
    EventKind,
    ScenarioEvent,
    load_trace,
    parse_trace_lines,
    run_path,
    run_trace,
    trace_to_lines,
)
from .scenarios import builtin_expectation, builtin_names, builtin_scenario
from .world import (
    AppDescriptor,
    ConfirmMode,
    DeviceId,
    OperationKind,
    Permission,
    SoftButton,
    check_permissions,
    classify_stealth_capabilities,
    required_permissions,
)

__version__ = "0.1.0"

__all__ = [
    "AppDescriptor",
    "ConfirmMode",
    "DeviceId",
    "Engine",
    "EngineConfig",
    "EventKind",
    "FaultKind",
    "OperationKind",
    "Permission",
    "ScenarioEvent",
    "SoftButton",
    "TerminationReason",
    "builtin_expectation",
    "builtin_names",
    "builtin_scenario",
    "check_permissions",
    "classify_stealth_capabilities",
    "load_trace",
    "parse_trace_lines",
    "required_permissions",
    "run_path",
    "run_trace",
    "trace_to_lines",
]
