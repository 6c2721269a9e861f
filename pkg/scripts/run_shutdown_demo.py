#!/usr/bin/env python3
"""Replay the shutdown scenario headless and print the gate's story.

Runs the fixture twice (approve-all, then reject-all) and shows how the
verdict mix, execution outcomes and systemic HEP differ while the audit
trail stays deterministic.

Usage:
    python scripts/run_shutdown_demo.py [--fixtures fixtures/shutdown]
"""
from __future__ import annotations

import argparse
import io
from pathlib import Path

from procgate import audit as audit_mod
from procgate.config import load_scenario
from procgate.perception import load_telemetry
from procgate.runtime import ScriptedApprovals, run_replay


def show_run(title: str, scenario, frames, approvals) -> None:
    sink = io.StringIO()
    runtime, report = run_replay(scenario, frames, approvals, audit_sink=sink)
    records = audit_mod.parse_log(sink.getvalue())
    print(f"\n=== {title} ===")
    print(f"event: {report['detected_event']['name']}")
    print(f"{'step':>7}  {'p_t':>10}  {'p_c':>10}  {'risk':>10}  verdict  outcome")
    for row in report["steps"]:
        print(
            f"{row['step_id']:>7}  {row['p_t']:10.3e}  {row['p_c']:10.3e}  "
            f"{row['action_risk']:10.3e}  {row['verdict']:<7}  {row['lifecycle']}"
        )
    print(f"systemic HEP: {report['systemic_hep']:.6g}")
    print(f"audit records: {len(records)}  "
          f"authority violations: {audit_mod.authority_violations(records)}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixtures", default="fixtures/shutdown", type=Path)
    args = parser.parse_args()

    scenario = load_scenario(args.fixtures / "scenario.json")
    frames = load_telemetry(args.fixtures / "telemetry_event.csv")
    show_run("approve all suggestions", scenario, frames, ScriptedApprovals.approve_all())
    show_run("reject all suggestions", scenario, frames, ScriptedApprovals.reject_all())


if __name__ == "__main__":
    main()
