"""Append-only audit log with deterministic serialization and replay checks.

Every state transition in the runtime appends exactly one record; seq is
a gapless monotone counter and tick is the runtime clock (never wall
clock), so replaying identical inputs reproduces the log byte for byte.

Record kinds:
    event_detected, unknown_event, procedure_activated, step_evaluated,
    approval_issued, approval_resolved, step_executed, step_skipped,
    checklist_verified, systemic_hep, procedure_completed, replay_stalled
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO


@dataclass(frozen=True)
class AuditRecord:
    seq: int
    tick: int
    kind: str
    actor: str = "system"  # system | human
    operator_action: str = "none"  # none | approved | rejected
    step_id: str | None = None
    p_t: float | None = None
    p_c: float | None = None
    step_hep: float | None = None
    action_risk: float | None = None
    workload_score: float | None = None
    verdict: str | None = None
    explanation: tuple[dict, ...] = ()
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "tick": self.tick,
            "kind": self.kind,
            "actor": self.actor,
            "operator_action": self.operator_action,
            "step_id": self.step_id,
            "p_t": self.p_t,
            "p_c": self.p_c,
            "step_hep": self.step_hep,
            "action_risk": self.action_risk,
            "workload_score": self.workload_score,
            "verdict": self.verdict,
            "explanation": list(self.explanation),
            "payload": self.payload,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


class AuditLog:
    """In-memory record list, optionally mirrored line-by-line to a file."""

    def __init__(self, sink: IO[str] | None = None) -> None:
        self._records: list[AuditRecord] = []
        self._sink = sink

    def append(self, tick: int, kind: str, **fields) -> AuditRecord:
        record = AuditRecord(seq=len(self._records) + 1, tick=tick, kind=kind, **fields)
        self._records.append(record)
        if self._sink is not None:
            self._sink.write(record.to_json() + "\n")
            self._sink.flush()
        return record

    def records(self, since: int = 0) -> list[AuditRecord]:
        """Records with seq > since (records are immutable, list is a copy)."""
        return [r for r in self._records if r.seq > since]

    def __len__(self) -> int:
        return len(self._records)

    def last_seq(self) -> int:
        return self._records[-1].seq if self._records else 0


def parse_log(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def check_seq_gapless(records: list[dict]) -> bool:
    return [r["seq"] for r in records] == list(range(1, len(records) + 1))


def authority_violations(records: list[dict]) -> list[str]:
    """Step ids that reached Executed despite a gated verdict without a
    human approval in between. An empty list certifies the replay.
    """
    violations: list[str] = []
    latest_verdict: dict[str, str] = {}
    approved_since_eval: dict[str, bool] = {}
    for record in records:
        step_id = record.get("step_id")
        kind = record["kind"]
        if kind == "step_evaluated" and step_id:
            latest_verdict[step_id] = record.get("verdict")
            approved_since_eval[step_id] = False
        elif (
            kind == "approval_resolved"
            and step_id
            and record.get("actor") == "human"
            and record.get("operator_action") == "approved"
        ):
            approved_since_eval[step_id] = True
        elif kind == "step_executed" and step_id:
            verdict = latest_verdict.get(step_id)
            if verdict in ("Suggest", "Block") and not approved_since_eval.get(step_id):
                violations.append(step_id)
    return violations


def executed_step_heps(records: list[dict]) -> dict[str, float]:
    """Latest evaluated HEP for every step that reached Executed."""
    latest_hep: dict[str, float] = {}
    executed: dict[str, float] = {}
    for record in records:
        step_id = record.get("step_id")
        if record["kind"] == "step_evaluated" and step_id:
            latest_hep[step_id] = record["step_hep"]
        elif record["kind"] == "step_executed" and step_id:
            executed[step_id] = latest_hep[step_id]
    return executed
