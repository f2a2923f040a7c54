"""Microbenchmarks over the mediation and decision path.

For each device path the granted route (consented gesture, request,
session open) and the blocked route (background request, no gesture) are
timed per request, host clock, nanosecond resolution. The baseline is the
conventional permission check alone, which is what a monitor-less system
would run; the overhead ratio compares granted-route means against it.
"""

from __future__ import annotations

import statistics
from time import perf_counter_ns
from typing import Optional

from .engine import Engine, EngineConfig
from .world import (
    SERVICE_FOR_OP,
    AppDescriptor,
    ConfirmMode,
    DeviceId,
    OperationKind,
    Permission,
    SoftButton,
    check_permissions,
)

DEVICE_PATHS = (
    ("FrontCamera", OperationKind.TAKE_PHOTO, DeviceId.FRONT_CAMERA),
    ("BackCamera", OperationKind.TAKE_PHOTO, DeviceId.BACK_CAMERA),
    ("Microphone", OperationKind.RECORD_AUDIO, DeviceId.MICROPHONE),
    ("Screen", OperationKind.CAPTURE_SCREENSHOT, DeviceId.SCREEN_BUFFER),
)


def _stats(samples_ns: list[int]) -> dict:
    us = [s / 1000.0 for s in samples_ns]
    return {
        "n": len(us),
        "mean_us": statistics.fmean(us),
        "stddev_us": statistics.pstdev(us),
        "max_us": max(us),
    }


def _bench_engine(op: OperationKind, device: DeviceId,
                  config: EngineConfig) -> Engine:
    engine = Engine(config)
    engine.install_app(
        AppDescriptor(
            app_id="bench.app",
            display_name="BenchApp",
            granted_permissions=set(Permission),
            soft_buttons=[
                SoftButton("b", "go", op, device, ConfirmMode.RELEASE_TO_CONFIRM)
            ],
        )
    )
    engine.install_app(
        AppDescriptor(
            app_id="bench.rat",
            display_name="BenchRat",
            granted_permissions=set(Permission),
        )
    )
    engine.set_foreground("bench.app")
    return engine


def bench(n: int, config: Optional[EngineConfig] = None) -> dict:
    """Time n granted-path and n blocked-path decisions per device path."""
    if n < 1:
        raise ValueError("n must be >= 1")
    base = config or EngineConfig()
    cfg = EngineConfig(
        pending_timeout_ms=base.pending_timeout_ms,
        grace_ms=base.grace_ms,
        alternation_interval_ms=base.alternation_interval_ms,
        violation_display_ms=base.violation_display_ms,
        record_timeline=False,
        record_hooks=False,
    )
    from .gestures import GestureEvent, GestureEventKind

    paths = {}
    for name, op, device in DEVICE_PATHS:
        engine = _bench_engine(op, device, cfg)
        t = 100
        granted = []
        for _ in range(n):
            engine.advance_to(t)
            engine.gesture(GestureEvent(GestureEventKind.POINTER_DOWN, t, button_id="b"))
            engine.gesture(GestureEvent(GestureEventKind.POINTER_UP, t))
            engine.submit_request("bench.app", op, device)
            granted.append(engine.decisions[-1]["latency_ns"])
            engine.app_release("bench.app")
            t += 10
        blocked = []
        for _ in range(n):
            engine.advance_to(t)
            engine.submit_request("bench.rat", op, device)
            blocked.append(engine.decisions[-1]["latency_ns"])
            t += 10
        rat = engine.world.require("bench.rat")
        baseline = []
        for _ in range(n):
            t0 = perf_counter_ns()
            check_permissions(rat, op)
            SERVICE_FOR_OP[op]
            baseline.append(perf_counter_ns() - t0)
        g, b, base_stats = _stats(granted), _stats(blocked), _stats(baseline)
        overhead = (
            (g["mean_us"] - base_stats["mean_us"]) / base_stats["mean_us"]
            if base_stats["mean_us"] > 0
            else float("inf")
        )
        paths[name] = {
            "granted": g,
            "blocked": b,
            "baseline": base_stats,
            "overhead_ratio": overhead,
        }
    return {"n": n, "paths": paths}


def format_table(result: dict) -> str:
    lines = [
        f"runs per path: {result['n']}",
        f"{'device':<12} {'baseline us':>16} {'granted us':>22} "
        f"{'blocked us':>22} {'overhead':>9}",
    ]
    for name, p in result["paths"].items():
        b, g, k = p["baseline"], p["granted"], p["blocked"]
        lines.append(
            f"{name:<12} "
            f"{b['mean_us']:>8.2f}±{b['stddev_us']:<7.2f} "
            f"{g['mean_us']:>9.2f}±{g['stddev_us']:<6.2f} (max {g['max_us']:.1f}) "
            f"{k['mean_us']:>6.2f}±{k['stddev_us']:<6.2f} (max {k['max_us']:.1f}) "
            f"{p['overhead_ratio'] * 100:>8.1f}%"
        )
    return "\n".join(lines)
