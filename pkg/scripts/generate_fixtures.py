#!/usr/bin/env python3
"""Regenerate every checked-in fixture under fixtures/.

Outputs are deterministic (fixed seed, fixed formatting), so diffs after a
rerun mean the generator itself changed. The shutdown interface graph and
checklist transcribe the reference operating documentation verbatim; the
telemetry corpus is synthetic, built to be cleanly separable for the
nearest-centroid detector.

Usage:
    python scripts/generate_fixtures.py [--out fixtures]
"""
from __future__ import annotations

import argparse
import csv
import json
import math
from pathlib import Path

import numpy as np

from procgate.gate import default_gate_config
from procgate.perception import NominalStats, TelemetryFrame, window_features

# --------------------------------------------------------------------------
# Shutdown interface graph: categorized operational paths (label, x, y).
# "Parameter Tuning" / "Parameter Tuning End" carry no source coordinates;
# theirs are synthetic. Codes repeat across (and once within) categories with
# inconsistent spellings/coordinates; they are reproduced as-is, and a code
# seen twice keeps its first coordinates (element ids are unique).
# --------------------------------------------------------------------------

PATHS: dict[str, list[tuple[str, int, int]]] = {
    "Flowchart Execution 1": [
        ("Procedure", 198, 95),
        ("Coordination Control", 217, 226),
        ("Thermal Power Setpoint", 393, 561),
        ("Parameter Tuning", 460, 561),
        ("Parameter Tuning End", 460, 620),
    ],
    "Flowchart Execution 2": [
        ("Procedure", 198, 95),
        ("Reactor Power Control", 217, 180),
        ("Rod Insertion", 1576, 511),
    ],
    "Flowchart Execution 3": [
        ("Procedure", 198, 95),
        ("Reactor Overview", 209, 155),
        ("Steam Temperature", 1661, 631),
        ("Steam Pressure", 1839, 525),
        ("Feedwater Flow", 1321, 506),
    ],
    "Screen Navigation 1": [
        ("Screen Lookup", 1390, 87),
        ("Reactor", 1393, 126),
        ("Conventional Island", 1341, 237),
        ("I#2# Startup/Shutdown System", 363, 347),
        ("LBH0AA101", 484, 333),
        ("LBH0AA201", 574, 327),
        ("LBH0AA102", 761, 326),
        ("LBH20AA101", 1383, 324),
        ("LBH0AA103", 1025, 234),
        ("LBH20AA101", 1157, 570),
        ("LBH30AA201", 1273, 371),
        ("LBH50AA101", 1508, 577),
    ],
    "Screen Navigation 2": [
        ("Screen Lookup", 1390, 87),
        ("Reactor", 1393, 126),
        ("Conventional Island", 1341, 237),
        ("I#2# Main Steam System", 1214, 302),
        ("LBF20AA201", 1190, 304),
        ("LBF20AA101", 1183, 310),
        ("LBA20AA101", 1398, 131),
        ("LBA20AA102", 1331, 236),
    ],
    "Screen Navigation 3": [
        ("Screen Lookup", 1390, 87),
        ("Reactor", 1393, 126),
        ("Conventional Island", 1341, 237),
        ("I#2# Startup/Shutdown System", 363, 347),
        ("LBH07AA101", 490, 957),
        ("LBH07AA102", 582, 950),
        ("LBH08AA101", 378, 442),
        ("LBH08AA102", 1383, 439),
    ],
    "Screen Navigation 4": [
        ("Screen Lookup", 1390, 87),
        ("Reactor", 1393, 126),
        ("Conventional Island", 1341, 237),
        ("I#2# Main Steam System", 1214, 302),
        ("LBF20AA201", 1190, 304),
    ],
    "Screen Navigation 5": [
        ("Screen Lookup", 1390, 87),
        ("Reactor", 1393, 126),
        ("Conventional Island", 1341, 237),
        ("I#2# Reactor Main Steam System", 1214, 302),
        ("LBA20AA101", 1398, 131),
        ("LBA20AA102", 1331, 236),
        ("LBF20AA101", 1190, 304),
        ("LBF20AA202", 647, 458),
    ],
    "Top-Left Toggle 1": [
        ("Top-Left Toggle", 143, 37),
        ("I#3# Startup/Shutdown System", 363, 347),
        ("LBH0AA101", 484, 333),
        ("LBH10AA201", 574, 327),
        ("LBH09AA101", 1025, 234),
        ("LBH20AA102", 761, 326),
        ("LBH20AA201", 1383, 324),
    ],
    "Top-Left Toggle 2": [
        ("Top-Left Toggle", 143, 37),
        ("I#2# Reactor Main Steam System", 1214, 302),
        ("LBF20AA102", 1199, 599),
        ("LBF20AA202", 647, 458),
    ],
}

PARENTS: dict[str, str | None] = {
    "Procedure": None,
    "Screen Lookup": None,
    "Top-Left Toggle": None,
    "Coordination Control": "Procedure",
    "Reactor Power Control": "Procedure",
    "Reactor Overview": "Procedure",
    "Thermal Power Setpoint": "Coordination Control",
    "Parameter Tuning": "Thermal Power Setpoint",
    "Parameter Tuning End": "Parameter Tuning",
    "Rod Insertion": "Reactor Power Control",
    "Steam Temperature": "Reactor Overview",
    "Steam Pressure": "Reactor Overview",
    "Feedwater Flow": "Reactor Overview",
    "Reactor": "Screen Lookup",
    "Conventional Island": "Reactor",
    "I#2# Startup/Shutdown System": "Conventional Island",
    "I#2# Main Steam System": "Conventional Island",
    "I#2# Reactor Main Steam System": "Conventional Island",
    "I#3# Startup/Shutdown System": "Top-Left Toggle",
    "LBH0AA101": "I#2# Startup/Shutdown System",
    "LBH0AA201": "I#2# Startup/Shutdown System",
    "LBH0AA102": "I#2# Startup/Shutdown System",
    "LBH20AA101": "I#2# Startup/Shutdown System",
    "LBH0AA103": "I#2# Startup/Shutdown System",
    "LBH30AA201": "I#2# Startup/Shutdown System",
    "LBH50AA101": "I#2# Startup/Shutdown System",
    "LBH07AA101": "I#2# Startup/Shutdown System",
    "LBH07AA102": "I#2# Startup/Shutdown System",
    "LBH08AA101": "I#2# Startup/Shutdown System",
    "LBH08AA102": "I#2# Startup/Shutdown System",
    "LBF20AA201": "I#2# Main Steam System",
    "LBF20AA101": "I#2# Main Steam System",
    "LBA20AA101": "I#2# Main Steam System",
    "LBA20AA102": "I#2# Main Steam System",
    "LBF20AA202": "I#2# Reactor Main Steam System",
    "LBF20AA102": "I#2# Reactor Main Steam System",
    "LBH10AA201": "I#3# Startup/Shutdown System",
    "LBH09AA101": "I#3# Startup/Shutdown System",
    "LBH20AA102": "I#3# Startup/Shutdown System",
    "LBH20AA201": "I#3# Startup/Shutdown System",
}

KINDS: dict[str, str] = {
    "Procedure": "screen",
    "Screen Lookup": "lookup",
    "Top-Left Toggle": "toggle",
    "Coordination Control": "panel",
    "Reactor Power Control": "panel",
    "Reactor Overview": "panel",
    "Thermal Power Setpoint": "button",
    "Parameter Tuning": "button",
    "Parameter Tuning End": "button",
    "Rod Insertion": "button",
    "Steam Temperature": "indicator",
    "Steam Pressure": "indicator",
    "Feedwater Flow": "indicator",
}


def element_kind(name: str) -> str:
    if name in KINDS:
        return KINDS[name]
    if name.startswith("LB"):
        return "valve_control"
    return "screen"


def edge_action(src: str, dst: str) -> str:
    if src == "Screen Lookup":
        return "lookup"
    if src == "Top-Left Toggle":
        return "toggle"
    if element_kind(dst) in ("screen", "panel"):
        return "navigate"
    return "click"


def build_graph() -> dict:
    elements: dict[str, dict] = {}
    order: list[str] = []
    for column in PATHS.values():
        for name, x, y in column:
            if name not in elements:
                elements[name] = {"id": name, "label": name, "kind": element_kind(name),
                                  "x": x, "y": y, "parent": PARENTS[name]}
                order.append(name)

    def layer_of(name: str) -> int:
        depth = 0
        while elements[name]["parent"] is not None:
            name = elements[name]["parent"]
            depth += 1
        return depth

    for name in order:
        elements[name]["layer"] = layer_of(name)

    edges: list[dict] = []
    seen_pairs: set[tuple[str, str]] = set()
    for column in PATHS.values():
        for (src, _, _), (dst, _, _) in zip(column, column[1:]):
            if src == dst or (src, dst) in seen_pairs:
                continue
            seen_pairs.add((src, dst))
            edges.append({"from": src, "to": dst, "action": edge_action(src, dst)})

    ordered = sorted(order, key=lambda n: (elements[n]["layer"], order.index(n)))
    return {
        "elements": [
            {k: elements[n][k] for k in ("id", "label", "kind", "x", "y", "layer", "parent")}
            for n in ordered
        ],
        "edges": edges,
    }


# --------------------------------------------------------------------------
# Procedure document and valve checklist
# --------------------------------------------------------------------------

CHECKLIST_ROWS = [
    (1, "LBH10AA101", "Moisture Separator Inlet Isolation Valve 1", "Closed"),
    (2, "LBH10AA201", "Moisture Separator Inlet Regulating Valve", "Open"),
    (3, "LBH10AA102", "Moisture Separator Inlet Isolation Valve 2", "Closed"),
    (4, "LBH20AA101", "Moisture Separator Outlet Isolation Valve", "Closed"),
    (5, "LBH09AA101", "Moisture Separator Bypass Isolation Valve", "Open"),
    (6, "LBH30AA101", "Moisture Separator Drain Isolation Valve", "Open"),
    (7, "LBH30AA201", "Moisture Separator Drain Regulating Valve", "Open"),
    (8, "LBH50AA101", "Moisture Separator Drain to Condenser Isolation Valve", "Open"),
    (9, "LBF20AA201", "Reactor Turbine Bypass Valve", "Auto"),
    (10, "LBF20AA101", "Reactor Main Steam to Bypass Motorized Isolation Valve", "Open"),
    (11, "LBA20AA101", "Reactor Main Steam Motorized Isolation Valve 1", "Open"),
    (12, "LBA20AA102", "Reactor Main Steam Motorized Isolation Valve 2", "Open"),
]

STEP_DEFS = [
    ("FE-1", "flowchart_execution", "Flowchart Execution 1",
     "Reduce reactor thermal power to the shutdown setpoint via coordinated control."),
    ("FE-2", "flowchart_execution", "Flowchart Execution 2",
     "Insert control rods to complete the power rundown."),
    ("FE-3", "flowchart_execution", "Flowchart Execution 3",
     "Verify steam temperature, steam pressure and feedwater flow against shutdown limits."),
    ("NAV-1", "screen_navigation", "Screen Navigation 1",
     "Open the startup/shutdown system screen and verify the moisture separator drain line valves."),
    ("NAV-2", "screen_navigation", "Screen Navigation 2",
     "Navigate to the main steam system screen and check bypass and isolation valves."),
    ("NAV-3", "screen_navigation", "Screen Navigation 3",
     "Inspect the auxiliary drain isolation valves on the startup/shutdown system screen."),
    ("NAV-4", "screen_navigation", "Screen Navigation 4",
     "Recheck the turbine bypass valve on the main steam system screen."),
    ("NAV-5", "screen_navigation", "Screen Navigation 5",
     "Confirm the main steam isolation and bypass valve lineup."),
    ("TOG-1", "top_left_toggle", "Top-Left Toggle 1",
     "Switch to the unit 3 startup/shutdown system via the top-left toggle and verify the valve lineup."),
    ("TOG-2", "top_left_toggle", "Top-Left Toggle 2",
     "Open the reactor main steam system via the top-left toggle and close the bypass regulating valve."),
]


def build_procedure() -> str:
    lines = ["# Reactor Shutdown procedure fixture (synthetic step texts;",
             "# targets follow the categorized operational paths verbatim)", ""]
    for step_id, kind, category, text in STEP_DEFS:
        lines.append(f"[STEP {step_id} {kind}] {text}")
        for name, _, _ in PATHS[category]:
            lines.append(f"target: {name}")
        lines.append("")
    lines.append("[STEP CHK-1 checklist] Verify the shutdown loop valve status checklist.")
    for name in ("Screen Lookup", "Reactor", "Conventional Island",
                 "I#2# Startup/Shutdown System"):
        lines.append(f"target: {name}")
    for _, code, _, expected in CHECKLIST_ROWS:
        lines.append(f"expect: {code}={expected}")
    lines.append("")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# Telemetry synthesis
# --------------------------------------------------------------------------

PARAM_BASE: dict[str, float] = {
    "Nuclear Power": 183.6,
    "Thermal Power #1": 198.3,
    "Thermal Power #2": 199.4,
    "Helium Blower Speed #1": 3820.0,
    "Helium Blower Speed #2": 3815.0,
    "Hot Helium Temp #1": 541.8,
    "Hot Helium Temp #2": 542.27,
    "Cold Helium Temp #1": 250.9,
    "Cold Helium Temp #2": 251.35,
    "Primary Loop Pressure #1": 7.02,
    "Primary Loop Pressure #2": 7.01,
    "Steam Generator Level #1": 2.15,
    "Steam Generator Level #2": 2.14,
    "Steam Generator Pressure #1": 13.9,
    "Steam Generator Pressure #2": 13.88,
    "Main Steam Temp #1": 566.5,
    "Main Steam Temp #2": 566.2,
    "Main Steam Pressure": 13.24,
    "Main Steam Flow": 96.1,
    "Feedwater Flow #1": 48.2,
    "Feedwater Flow #2": 48.0,
    "Feedwater Temp": 205.3,
    "Condenser Level": 704.2,
    "Condenser Pressure": 0.0063,
    "Condensate Flow": 95.4,
    "Generator Active Power": 211.3,
    "Generator Reactive Power": 38.7,
    "Generator Voltage": 6.31,
    "6kV 1B Bus Voltage": 6.28,
    "Control Rod Position #1": 2150.0,
    "Control Rod Position #2": 2140.0,
    "Turbine Speed": 3000.0,
    "Circulating Water Temp": 24.6,
}

assert len(PARAM_BASE) == 33

# (target value, frames to reach it) per perturbed parameter
EVENTS: dict[str, dict] = {
    "EV-GEN-6KV1B-DISC": {
        "name": "Disconnection of Generator to 6kV 1B Bus bar",
        "moves": {
            "Generator Active Power": (0.0, 10),
            "Generator Reactive Power": (0.0, 10),
            "6kV 1B Bus Voltage": (0.4, 8),
            "Generator Voltage": (1.1, 12),
            "Turbine Speed": (3085.0, 40),
            "Main Steam Pressure": (13.9, 60),
            "Condenser Level": (640.0, 80),
        },
    },
    "EV-FW-PUMP-TRIP": {
        "name": "Loss of Main Feedwater Pump",
        "moves": {
            "Feedwater Flow #1": (6.0, 20),
            "Feedwater Flow #2": (6.0, 20),
            "Steam Generator Level #1": (1.5, 70),
            "Steam Generator Level #2": (1.52, 70),
            "Main Steam Flow": (70.0, 40),
            "Feedwater Temp": (198.0, 80),
        },
    },
    "EV-HE-BLOWER1-TRIP": {
        "name": "Primary Helium Blower #1 Trip",
        "moves": {
            "Helium Blower Speed #1": (100.0, 30),
            "Hot Helium Temp #1": (556.0, 70),
            "Cold Helium Temp #1": (258.0, 70),
            "Thermal Power #1": (160.0, 60),
            "Primary Loop Pressure #1": (7.4, 80),
        },
    },
}

N_FRAMES = 500
ONSET = 120
TICK0 = 17
TICK_STEP = 20
WINDOW_LEN = 50

# first two rows of the shutdown stream reproduce recorded samples verbatim
PINNED_ROWS = {
    0: {"Nuclear Power": 183.5995, "Thermal Power #1": 0.0,
        "Helium Blower Speed #1": 3826.837, "Hot Helium Temp #2": 542.2744,
        "Cold Helium Temp #2": 251.3571, "Condenser Level": 704.1935},
    1: {"Nuclear Power": 183.604, "Thermal Power #1": 198.2936,
        "Helium Blower Speed #1": 3820.901, "Hot Helium Temp #2": 542.2758,
        "Cold Helium Temp #2": 251.3527, "Condenser Level": 704.2556},
}

TAIL_ROW = {"time": 10610, "values": {
    "Nuclear Power": 183.0486, "Thermal Power #1": 199.7107,
    "Helium Blower Speed #1": 3800.0, "Hot Helium Temp #2": 519.5561,
    "Cold Helium Temp #2": 248.2146, "Condenser Level": 603.6227,
}}


def noise_std(base: float) -> float:
    return 0.0005 * abs(base) + 0.001


def nominal_std(base: float) -> float:
    return 0.002 * abs(base) + 0.01


def synth_stream(
    seed: int,
    event_id: str | None,
    scale: float = 1.0,
    pin_rows: bool = False,
    tail: bool = False,
) -> list[dict]:
    rng = np.random.default_rng(seed)
    params = list(PARAM_BASE)
    rows = []
    for i in range(N_FRAMES):
        values = {}
        for p in params:
            base = PARAM_BASE[p]
            value = base + rng.normal(0.0, noise_std(base))
            if event_id is not None and i >= ONSET:
                target, ramp = EVENTS[event_id]["moves"].get(p, (None, None))
                if target is not None:
                    frac = min(1.0, (i - ONSET) / ramp)
                    value = base + scale * frac * (target - base) + rng.normal(
                        0.0, noise_std(base)
                    )
            values[p] = value
        if pin_rows and i in PINNED_ROWS:
            values.update(PINNED_ROWS[i])
        rows.append({"time": TICK0 + TICK_STEP * i, "values": values})
    if tail:
        values = dict(rows[-1]["values"])
        values.update(TAIL_ROW["values"])
        rows.append({"time": TAIL_ROW["time"], "values": values})
    return rows


def write_csv(path: Path, rows: list[dict]) -> None:
    params = list(PARAM_BASE)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["TIME"] + params)
        for row in rows:
            writer.writerow(
                [row["time"]] + [f"{row['values'][p]:.4f}" for p in params]
            )


def to_frames(rows: list[dict]) -> list[TelemetryFrame]:
    return [TelemetryFrame(time=r["time"], values=dict(r["values"])) for r in rows]


def canonical_features(rows: list[dict], stats: NominalStats) -> np.ndarray:
    """Feature vector of the window ending 40 frames after the ramps settle."""
    end = ONSET + 90 + WINDOW_LEN
    return window_features(to_frames(rows)[:end][-WINDOW_LEN:], WINDOW_LEN, stats)


def build_signatures(stats: NominalStats) -> tuple[dict, dict]:
    signatures = []
    checks = {}
    centroids = {}
    for event_id in EVENTS:
        rows = synth_stream(seed=1000, event_id=event_id)
        centroids[event_id] = canonical_features(rows, stats)
    for event_id, event_def in EVENTS.items():
        centroid = centroids[event_id]
        own = []
        for seed, scale in ((2000, 0.9), (2001, 1.0), (2002, 1.1)):
            rows = synth_stream(seed=seed, event_id=event_id, scale=scale)
            own.append(float(np.linalg.norm(canonical_features(rows, stats) - centroid)))
        cross = [
            float(np.linalg.norm(centroids[other] - centroid))
            for other in EVENTS
            if other != event_id
        ]
        threshold = 0.35 * float(np.linalg.norm(centroid))
        checks[event_id] = {
            "norm": float(np.linalg.norm(centroid)),
            "own_max": max(own),
            "cross_min": min(cross),
            "threshold": threshold,
        }
        assert max(own) < threshold < min(cross), (event_id, checks[event_id])
        signatures.append({
            "event_id": event_id,
            "name": event_def["name"],
            "threshold": round(threshold, 6),
            "centroid": [round(v, 6) for v in centroid.tolist()],
        })
    return {"signatures": signatures}, checks


# --------------------------------------------------------------------------
# Component configs
# --------------------------------------------------------------------------

TIMING = {
    "visual_search_s": 1.10,
    "click_s": 0.20,
    "read_value_s": 1.35,
    "memory_retrieve_s": 1.20,
    "mental_prep_s": 1.35,
    "point_a_s": 0.10,
    "point_b_s_per_bit": 0.15,
    "default_target_width_px": 30.0,
    "home_position": [960.0, 540.0],
    "sigma": 0.28,
}

RISK_MODEL = {
    "base_hep": {
        "detection": 0.001,
        "understanding": 0.002,
        "decision_making": 0.002,
        "action_execution": 0.001,
    },
    # gentler than the library defaults (3/10) so a 12-node navigation under
    # time pressure lands near, not hard at, the probability ceiling
    "multipliers": {
        "information_completeness": {"moderate": 2.0, "high": 4.0},
        "hsi_complexity": {"moderate": 2.0, "high": 5.0},
        "task_complexity": {"moderate": 2.0, "high": 4.0},
        "workload": {"moderate": 1.5, "high": 3.0},
        "time_pressure": {"moderate": 2.0, "high": 5.0},
    },
    "assessor": {
        "hsi_moderate_nodes": 4,
        "hsi_high_nodes": 8,
        "task_moderate_targets": 4,
        "task_high_targets": 8,
        "workload_moderate": 30.0,
        "workload_high": 50.0,
        "time_pressure_moderate": 0.5,
        "time_pressure_high": 0.8,
    },
}

SCENARIO = {
    "scenario_id": "reactor-shutdown",
    "graph": "graph.json",
    "signatures": "signatures.json",
    "nominal_stats": "nominal_stats.json",
    "timing": "timing.json",
    "risk_model": "risk_model.json",
    "bayes_net": "bayes_net.json",
    "telemetry": "telemetry_event.csv",
    "window_len": WINDOW_LEN,
    "procedures": {
        "EV-GEN-6KV1B-DISC": {"name": "Reactor Shutdown", "file": "procedure.eop"}
    },
    "checklists": {"CHK-1": "checklist.csv"},
    "observed_states": {code: expected for _, code, _, expected in CHECKLIST_ROWS},
    "t_avail_s": {"default": 60.0, "per_step": {"NAV-1": 22.0}},
    "thresholds": {"allow_below": 0.001, "suggest_below": 0.05},
    "evidence": {"p_t_high": 0.2, "p_c_high": 0.01, "workload_high": 50.0},
    "approval_expiry_ticks": 600,
    "auto_execute_allow": True,
    "replay_frames_per_step": 25,
}


def dump_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="fixtures", type=Path)
    args = parser.parse_args()

    shutdown = args.out / "shutdown"
    corpus = args.out / "corpus"
    shutdown.mkdir(parents=True, exist_ok=True)
    corpus.mkdir(parents=True, exist_ok=True)

    dump_json(shutdown / "graph.json", build_graph())
    (shutdown / "procedure.eop").write_text(build_procedure(), encoding="utf-8")
    with open(shutdown / "checklist.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "valve_code", "valve_name", "expected"])
        writer.writerows(CHECKLIST_ROWS)

    stats_payload = {
        p: {"mean": base, "std": round(nominal_std(base), 6)}
        for p, base in PARAM_BASE.items()
    }
    dump_json(shutdown / "nominal_stats.json", stats_payload)
    stats = NominalStats.from_dict(stats_payload)

    signatures, checks = build_signatures(stats)
    dump_json(shutdown / "signatures.json", signatures)
    dump_json(shutdown / "timing.json", TIMING)
    dump_json(shutdown / "risk_model.json", RISK_MODEL)
    gate_config = default_gate_config()
    gate_config["thresholds"] = dict(SCENARIO["thresholds"])
    gate_config["evidence"] = dict(SCENARIO["evidence"])
    dump_json(shutdown / "bayes_net.json", gate_config)
    dump_json(shutdown / "scenario.json", SCENARIO)

    write_csv(
        shutdown / "telemetry_event.csv",
        synth_stream(seed=11, event_id="EV-GEN-6KV1B-DISC", pin_rows=True, tail=True),
    )
    write_csv(shutdown / "telemetry_nominal.csv", synth_stream(seed=12, event_id=None))

    labels = []
    for i, seed in enumerate((300, 301, 302)):
        name = f"nominal_{i + 1}.csv"
        write_csv(corpus / name, synth_stream(seed=seed, event_id=None))
        labels.append({"file": name, "event_id": None})
    for offset, event_id in enumerate(EVENTS):
        slug = event_id.lower().replace("-", "_")
        for i, (seed, scale) in enumerate(((400, 0.9), (401, 1.0), (402, 1.1))):
            name = f"{slug}_{i + 1}.csv"
            write_csv(corpus / name, synth_stream(seed=seed + 10 * offset,
                                                  event_id=event_id, scale=scale))
            labels.append({"file": name, "event_id": event_id})
    dump_json(corpus / "labels.json", {"window_len": WINDOW_LEN, "streams": labels})

    print(f"fixtures written to {args.out}/")
    for event_id, c in checks.items():
        print(
            f"  {event_id}: |centroid|={c['norm']:.2f} own_max={c['own_max']:.3f} "
            f"threshold={c['threshold']:.3f} cross_min={c['cross_min']:.2f}"
        )


if __name__ == "__main__":
    main()
