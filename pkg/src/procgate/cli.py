"""Command-line entry point.

Subcommands:
    replay        headless scenario replay with scripted approvals
    graph-export  dump an interface graph as JSON or DOT
    serve         run the console API (and optionally the web console)

Exit codes: 0 success; 2 config/input problem (missing or malformed files);
3 runtime failure during a replay; argparse usage errors also exit 2.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_scenario
from .errors import ConfigError, ProcGateError
from .interface_graph import load_graph
from .perception import load_telemetry
from .runtime import ScriptedApprovals, run_replay
from .server import ConsoleServer

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _fail(code: int, message: str) -> int:
    print(json.dumps({"error": message}), file=sys.stderr)
    return code


def cmd_replay(args: argparse.Namespace) -> int:
    telemetry_path = Path(args.telemetry)
    if not telemetry_path.exists():
        return _fail(EXIT_CONFIG, f"telemetry file not found: {telemetry_path}")
    try:
        scenario = load_scenario(args.scenario, args.config_dir)
        frames = load_telemetry(telemetry_path)
        if args.approvals:
            entries = json.loads(Path(args.approvals).read_text(encoding="utf-8"))
            approvals = ScriptedApprovals(entries)
        else:
            approvals = ScriptedApprovals(None)
    except FileNotFoundError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    except (ConfigError, json.JSONDecodeError, ValueError) as exc:
        return _fail(EXIT_CONFIG, f"config error: {exc}")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    audit_path = out_dir / "audit.jsonl"
    report_path = out_dir / "report.json"
    try:
        with open(audit_path, "w", encoding="utf-8") as sink:
            runtime, report = run_replay(scenario, frames, approvals, audit_sink=sink)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, f"config error: {exc}")
    except ProcGateError as exc:
        return _fail(EXIT_RUNTIME, f"replay failed: {exc}")

    report["audit_path"] = str(audit_path)
    report_path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")

    event = report["detected_event"]
    print(f"scenario : {report['scenario_id']}")
    print(f"event    : {event['name'] if event else '(none detected)'}")
    print(f"procedure: {report['procedure'] or '-'}")
    for row in report["steps"]:
        print(
            f"  {row['step_id']:>7}  p_t={row['p_t']:.3e}  p_c={row['p_c']:.3e}  "
            f"risk={row['action_risk']:.3e}  {row['verdict']:<7}  {row['lifecycle']}"
        )
    print(f"systemic HEP: {report['systemic_hep']:.6g}")
    print(f"report   : {report_path}")
    print(f"audit    : {audit_path}")
    if report["stalled"]:
        print("note: replay stalled on an unanswered approval", file=sys.stderr)
    return EXIT_OK


def cmd_graph_export(args: argparse.Namespace) -> int:
    try:
        graph = load_graph(args.graph)
    except FileNotFoundError:
        return _fail(EXIT_CONFIG, f"graph file not found: {args.graph}")
    except (ConfigError, json.JSONDecodeError, KeyError, ValueError) as exc:
        return _fail(EXIT_CONFIG, f"invalid graph: {exc}")
    try:
        payload = graph.export(args.format)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    if args.out:
        Path(args.out).write_bytes(payload)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(payload.decode())
    print(f"elements: {len(graph)}  edges: {len(graph.edges())}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario, args.config_dir)
        telemetry_path = Path(args.telemetry) if args.telemetry else scenario.telemetry_path
        if telemetry_path is None:
            return _fail(EXIT_CONFIG, "no telemetry: pass --telemetry or set it in the scenario")
        frames = load_telemetry(telemetry_path)
    except FileNotFoundError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, f"config error: {exc}")

    ui_dir = Path(args.ui_dir) if args.ui_dir else None
    if ui_dir is None:
        candidate = Path.cwd() / "frontend"
        if (candidate / "index.html").exists():
            ui_dir = candidate

    audit_sink = open(args.audit, "w", encoding="utf-8") if args.audit else None
    try:
        server = ConsoleServer(
            scenario,
            frames,
            port=args.port,
            audit_sink=audit_sink,
            ui_dir=ui_dir,
            step_interval_s=args.step_interval,
        )
    except OSError as exc:
        return _fail(EXIT_CONFIG, f"cannot bind port {args.port}: {exc}")
    print(f"listening on http://127.0.0.1:{server.port}", flush=True)
    if ui_dir:
        print(f"console ui from {ui_dir}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()
    finally:
        if audit_sink:
            audit_sink.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="procgate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    replay = sub.add_parser("replay", help="replay a telemetry file through a scenario")
    replay.add_argument("--telemetry", required=True, help="telemetry CSV to replay")
    replay.add_argument("--scenario", required=True, help="scenario JSON config")
    replay.add_argument("--config-dir", default=None,
                        help="base directory for files referenced by the scenario")
    replay.add_argument("--approvals", default=None,
                        help="JSON approvals script: [{\"ordinal\": 0|\"*\", \"decision\": ...}]")
    replay.add_argument("--out-dir", default="replay_out",
                        help="where report.json and audit.jsonl land")
    replay.set_defaults(func=cmd_replay)

    export = sub.add_parser("graph-export", help="export an interface graph")
    export.add_argument("--graph", required=True, help="graph JSON file")
    export.add_argument("--format", choices=("json", "dot"), default="dot")
    export.add_argument("--out", default=None, help="output path (stdout if omitted)")
    export.set_defaults(func=cmd_graph_export)

    serve = sub.add_parser("serve", help="serve the console API over a live replay")
    serve.add_argument("--scenario", required=True)
    serve.add_argument("--config-dir", default=None)
    serve.add_argument("--telemetry", default=None,
                       help="overrides the scenario's telemetry file")
    serve.add_argument("--port", type=int, default=8787, help="0 picks a free port")
    serve.add_argument("--ui-dir", default=None, help="static console files to serve at /")
    serve.add_argument("--audit", default=None, help="also mirror audit records to this file")
    serve.add_argument("--step-interval", type=float, default=0.5,
                       help="wall-clock pacing between steps (cosmetic only)")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
