"""Command-line front end: run scenarios, export logs, benchmark, serve
the interactive bridge."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import bench as bench_mod
from . import scenarios
from .audit import iso_time
from .engine import EngineConfig
from .errors import SimulationError
from .harness import load_trace, run_trace
from .verify import report_json


def _config_from(args) -> EngineConfig:
    return EngineConfig(
        pending_timeout_ms=args.pending_timeout_ms,
        grace_ms=args.grace_ms,
        alternation_interval_ms=args.alternation_ms,
        violation_display_ms=args.violation_ms,
    )


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pending-timeout-ms", type=int, default=10000)
    p.add_argument("--grace-ms", type=int, default=3000)
    p.add_argument("--alternation-ms", type=int, default=2000)
    p.add_argument("--violation-ms", type=int, default=3000)


def summarize(report: dict) -> str:
    s = report["summary"]
    log = s["log"]
    return "\n".join(
        [
            f"blocked={s['monitor_blocked']} granted={s['granted']} "
            f"denied={s['user_denied']} conventional_denied={s['conventional_denied']}",
            f"log: authorized={log['Authorized']} terminated={log['Terminated']} "
            f"blocked={log['Blocked']} denied={log['Denied']} retro={log['Retro']}",
            f"requests={s['requests']} sessions={s['sessions']} "
            f"sounds={s['sound_events']} end_t_ms={s['end_t_ms']}",
        ]
    )


def _cmd_run(args) -> int:
    expectation = None
    if args.builtin:
        events = scenarios.builtin_scenario(args.builtin)
        expectation = scenarios.builtin_expectation(args.builtin)
        name = args.builtin
        print(f"scenario={args.builtin}")
    else:
        events = load_trace(args.trace)
        name = os.path.splitext(os.path.basename(args.trace))[0]
        print(f"trace={args.trace}")
    report = run_trace(events, _config_from(args))
    print(summarize(report))
    report_path = args.report or f"{name}.report.json"
    if not args.no_report:
        with open(report_path, "w", encoding="utf-8") as f:
            f.write(report_json(report))
        print(f"report written to {report_path}")
    if expectation is not None:
        problems = expectation.check(report)
        if problems:
            print("expectation: FAIL " + "; ".join(problems))
            return 1
        print("expectation: PASS")
    return 0


def _cmd_list(_args) -> int:
    print("builtin scenarios:")
    for name in scenarios.builtin_names():
        print(f"  {name}")
    print("serve worlds:")
    for name in scenarios.world_names():
        print(f"  {name}")
    return 0


def _cmd_export_log(args) -> int:
    with open(args.report, "r", encoding="utf-8") as f:
        report = json.load(f)
    lines = []
    for e in report["log"]:
        lines.append(
            "|".join(
                [
                    str(e["seq"]),
                    iso_time(e["t_ms"]),
                    e["category"],
                    e["app_id"],
                    e["op"] or "-",
                    e["device"] or "-",
                    e["detail"],
                ]
            )
        )
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bench(args) -> int:
    result = bench_mod.bench(args.n, _config_from(args))
    print(bench_mod.format_table(result))
    return 0


def _cmd_serve(args) -> int:
    from .bridge import BridgeServer

    server = BridgeServer(
        world_name=args.world, host=args.host, port=args.port,
        config=_config_from(args),
    )
    server.start()
    print(f"listening on {server.host}:{server.port}", flush=True)
    try:
        server.wait()
    except KeyboardInterrupt:
        server.stop()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="consentgate",
        description="Simulated phone with a gesture-bound I/O access monitor",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a trace or builtin scenario")
    p_run.add_argument("trace", nargs="?", help="trace file path")
    p_run.add_argument("--builtin", help="builtin scenario name")
    p_run.add_argument("--report",
                       help="report path (default <name>.report.json)")
    p_run.add_argument("--no-report", action="store_true",
                       help="skip writing the report file")
    _add_config_flags(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_list = sub.add_parser("list", help="list builtin scenarios")
    p_list.set_defaults(fn=_cmd_list)

    p_export = sub.add_parser("export-log", help="export a report's log")
    p_export.add_argument("report", help="report JSON path")
    p_export.add_argument("--out", help="output path (default stdout)")
    p_export.set_defaults(fn=_cmd_export_log)

    p_bench = sub.add_parser("bench", help="run the mediation microbenchmark")
    p_bench.add_argument("--n", type=int, default=10000)
    _add_config_flags(p_bench)
    p_bench.set_defaults(fn=_cmd_bench)

    p_serve = sub.add_parser("serve", help="serve the interactive bridge")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--world", default="interactive")
    _add_config_flags(p_serve)
    p_serve.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run" and bool(args.trace) == bool(args.builtin):
        parser.error("run needs exactly one of TRACE or --builtin")
    try:
        return args.fn(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SimulationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
