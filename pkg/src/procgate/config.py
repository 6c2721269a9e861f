"""Scenario configuration: one JSON file binding every runtime input.

A scenario names the interface graph, event signatures, nominal telemetry
statistics, the procedure mapped to each detectable event, per-step time
budgets, gate thresholds and the component configs (timing, risk model,
Bayesian network). Referenced files resolve relative to a config directory
(by default the scenario file's own directory).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .gate import BayesNetwork, GateThresholds, build_network, default_gate_config
from .interface_graph import DEFAULT_BOUNDS, InterfaceGraph, load_graph
from .operator_model import TimingConfig
from .perception import (
    DEFAULT_WINDOW_LEN,
    EventSignature,
    NominalStats,
    load_signatures,
)
from .procedures import ChecklistItem, load_checklist
from .risk import RiskModelConfig


@dataclass(frozen=True)
class EvidenceThresholds:
    """Cut points mapping continuous risk inputs onto BN evidence states."""

    p_t_high: float = 0.2
    p_c_high: float = 0.01
    workload_high: float = 50.0


@dataclass
class ProcedureBinding:
    event_id: str
    name: str
    document: str


@dataclass
class Scenario:
    scenario_id: str
    graph: InterfaceGraph
    signatures: list[EventSignature]
    nominal_stats: NominalStats
    procedures: dict[str, ProcedureBinding]
    checklists: dict[str, list[ChecklistItem]] = field(default_factory=dict)
    observed_states: dict[str, str] = field(default_factory=dict)
    timing: TimingConfig = field(default_factory=TimingConfig)
    risk_model: RiskModelConfig = field(default_factory=RiskModelConfig)
    network: BayesNetwork = field(default_factory=lambda: build_network(default_gate_config()))
    thresholds: GateThresholds = field(default_factory=GateThresholds)
    evidence: EvidenceThresholds = field(default_factory=EvidenceThresholds)
    window_len: int = DEFAULT_WINDOW_LEN
    t_avail_default_s: float = 60.0
    t_avail_per_step_s: dict[str, float] = field(default_factory=dict)
    approval_expiry_ticks: int = 600
    auto_execute_allow: bool = True
    replay_frames_per_step: int = 25
    telemetry_path: Path | None = None

    def t_avail_for(self, step_id: str) -> float:
        return self.t_avail_per_step_s.get(step_id, self.t_avail_default_s)


def _load_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"missing config file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None


def load_scenario(scenario_path: str | Path, config_dir: str | Path | None = None) -> Scenario:
    """Load and materialize a scenario config and everything it references."""
    scenario_path = Path(scenario_path)
    base = Path(config_dir) if config_dir is not None else scenario_path.parent
    raw = _load_json(scenario_path)

    def resolve(name: str) -> Path:
        return base / raw[name]

    try:
        bounds = tuple(raw.get("screen_bounds", DEFAULT_BOUNDS))
        graph = load_graph(resolve("graph"), bounds=bounds)
        signatures = load_signatures(_load_json(resolve("signatures")))
        stats = NominalStats.from_dict(_load_json(resolve("nominal_stats")))

        procedures: dict[str, ProcedureBinding] = {}
        for event_id, binding in raw.get("procedures", {}).items():
            doc_path = base / binding["file"]
            try:
                document = doc_path.read_text(encoding="utf-8")
            except FileNotFoundError:
                raise ConfigError(f"missing procedure file: {doc_path}") from None
            procedures[event_id] = ProcedureBinding(
                event_id=event_id,
                name=binding.get("name", doc_path.stem),
                document=document,
            )

        checklists = {
            step_id: load_checklist(base / rel)
            for step_id, rel in raw.get("checklists", {}).items()
        }

        timing = (
            TimingConfig.from_dict(_load_json(base / raw["timing"]))
            if "timing" in raw
            else TimingConfig()
        )
        risk_model = (
            RiskModelConfig.from_dict(_load_json(base / raw["risk_model"]))
            if "risk_model" in raw
            else RiskModelConfig()
        )

        gate_cfg = (
            _load_json(base / raw["bayes_net"])
            if "bayes_net" in raw
            else default_gate_config()
        )
        network = build_network(gate_cfg)
        thresholds_raw = raw.get("thresholds", gate_cfg.get("thresholds"))
        thresholds = GateThresholds(**thresholds_raw) if thresholds_raw else GateThresholds()
        evidence_raw = raw.get("evidence", gate_cfg.get("evidence"))
        evidence = EvidenceThresholds(**evidence_raw) if evidence_raw else EvidenceThresholds()

        budgets = raw.get("t_avail_s", {})
        telemetry = base / raw["telemetry"] if "telemetry" in raw else None

        return Scenario(
            scenario_id=raw.get("scenario_id", scenario_path.stem),
            graph=graph,
            signatures=signatures,
            nominal_stats=stats,
            procedures=procedures,
            checklists=checklists,
            observed_states=dict(raw.get("observed_states", {})),
            timing=timing,
            risk_model=risk_model,
            network=network,
            thresholds=thresholds,
            evidence=evidence,
            window_len=int(raw.get("window_len", DEFAULT_WINDOW_LEN)),
            t_avail_default_s=float(budgets.get("default", 60.0)),
            t_avail_per_step_s={k: float(v) for k, v in budgets.get("per_step", {}).items()},
            approval_expiry_ticks=int(raw.get("approval_expiry_ticks", 600)),
            auto_execute_allow=bool(raw.get("auto_execute_allow", True)),
            replay_frames_per_step=int(raw.get("replay_frames_per_step", 25)),
            telemetry_path=telemetry,
        )
    except KeyError as exc:
        raise ConfigError(f"scenario {scenario_path} missing required key: {exc}") from None
