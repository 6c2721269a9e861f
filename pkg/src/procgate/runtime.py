"""The observe -> map -> evaluate -> gate loop.

The runtime is a single-writer state machine: every mutation (telemetry
batches, step evaluation, approval submissions, cursor moves) enters
through one lock-serialized command surface, readers get plain-dict
snapshots. The clock is telemetry time in 10 ms ticks; nothing reads the
wall clock, which is what makes replays byte-for-byte reproducible.

Gated steps (Suggest/Block verdicts) park behind an approval token; the
step lifecycle cannot reach Executed without either an Allow verdict or a
human approval consuming that token.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from typing import IO

from .audit import AuditLog
from .config import Scenario
from .errors import (
    ExpiredApprovalError,
    NoActiveStepError,
    ProcGateError,
    StepNotExecutedError,
    UnknownApprovalError,
)
from .gate import RiskAssessment, Verdict, decide, fuse_step_hep, infer, systemic_hep
from .operator_model import (
    LoadContext,
    TimeEstimate,
    aggregate_workload,
    compile_primitives,
    estimate_median,
    p_t,
    predict_workload,
)
from .perception import EventLabel, SlidingDetector, TelemetryFrame
from .procedures import (
    ExecutionPath,
    Lifecycle,
    ProcedureStep,
    StepKind,
    compile_step,
    mark_executed,
    mark_intended,
    parse_procedure,
    verify_checklist,
)
from .risk import TableAssessor, p_c as compute_p_c


class RunMode(str, Enum):
    IDLE = "Idle"
    EVENT_ACTIVE = "EventActive"
    COMPLETED = "Completed"


@dataclass
class ApprovalToken:
    approval_id: str
    step_id: str
    ordinal: int
    issued_at: int
    expires_at: int
    assessment: RiskAssessment


class Runtime:
    """Owns procedure lifecycle, pending approvals, and the audit log."""

    def __init__(self, scenario: Scenario, audit_sink: IO[str] | None = None) -> None:
        self.scenario = scenario
        self.audit = AuditLog(sink=audit_sink)
        self.mode = RunMode.IDLE
        self.clock = 0
        self.active_event: EventLabel | None = None
        self.procedure_name: str | None = None
        self.steps: list[ProcedureStep] = []
        self.cursor = 0
        self.pending_approvals: dict[str, ApprovalToken] = {}
        self.assessments: list[RiskAssessment] = []
        self._latest: dict[str, RiskAssessment] = {}
        self._paths: dict[str, ExecutionPath] = {}
        self._assessor = TableAssessor(scenario.risk_model.thresholds)
        self._detector = SlidingDetector(
            scenario.signatures, scenario.nominal_stats, scenario.window_len
        )
        self._approval_ordinal = 0
        self._seen_unknown: set[str] = set()
        self._lock = threading.RLock()

    # -- observe ----------------------------------------------------------

    def tick(self, frames: list[TelemetryFrame]) -> None:
        """Feed telemetry in tick order; in Idle mode this drives detection."""
        with self._lock:
            for frame in frames:
                self.clock = frame.time
                if self.mode is not RunMode.IDLE:
                    continue
                label = self._detector.push(frame)
                if label is not None:
                    self._on_detection(label)

    def _on_detection(self, label: EventLabel) -> None:
        binding = self.scenario.procedures.get(label.event_id)
        if binding is None:
            if label.event_id not in self._seen_unknown:
                self._seen_unknown.add(label.event_id)
                self.audit.append(
                    self.clock,
                    "unknown_event",
                    payload={
                        "event_id": label.event_id,
                        "name": label.name,
                        "distance": label.distance,
                        "detected_at": label.detected_at,
                    },
                )
            return
        self.active_event = label
        self.audit.append(
            self.clock,
            "event_detected",
            payload={
                "event_id": label.event_id,
                "name": label.name,
                "distance": label.distance,
                "detected_at": label.detected_at,
            },
        )
        self.steps = parse_procedure(binding.document)
        self.procedure_name = binding.name
        self.cursor = 0
        self._paths = {}
        for step in self.steps:  # fail fast, with step context
            try:
                self._paths[step.id] = compile_step(step, self.scenario.graph)
            except ProcGateError as exc:
                raise type(exc)(f"step {step.id!r}: {exc}") from exc
        self.mode = RunMode.EVENT_ACTIVE
        self.audit.append(
            self.clock,
            "procedure_activated",
            payload={
                "procedure": binding.name,
                "event_id": label.event_id,
                "steps": [s.id for s in self.steps],
            },
        )

    # -- evaluate ----------------------------------------------------------

    def current_step(self) -> ProcedureStep:
        if self.mode is not RunMode.EVENT_ACTIVE:
            raise NoActiveStepError(f"no active procedure in mode {self.mode.value}")
        if self.cursor >= len(self.steps):
            raise NoActiveStepError("cursor is past the final step")
        return self.steps[self.cursor]

    def evaluate_current_step(
        self, t_avail_s: float | None = None, confusion: bool = False
    ) -> RiskAssessment:
        """Run the full risk pipeline on the step under the cursor.

        Marks the step Intended (reading phase), appends the evaluation
        audit record, and parks a non-Allow verdict behind a fresh
        approval token.
        """
        with self._lock:
            step = self.current_step()
            if step.lifecycle is Lifecycle.EXECUTED:
                raise NoActiveStepError(f"step {step.id!r} is already executed")
            scenario = self.scenario
            if t_avail_s is None:
                t_avail_s = scenario.t_avail_for(step.id)
            try:
                path = self._paths[step.id]
                primitives = compile_primitives(path, step.kind, scenario.timing)
                median = estimate_median(primitives, scenario.timing)
                estimate = TimeEstimate(median_s=median, sigma=scenario.timing.sigma)
                time_risk = p_t(estimate, t_avail_s)
                ratio = median / t_avail_s
                pending = len(self.steps) - self.cursor - 1
                workload = predict_workload(
                    LoadContext(
                        path_len=len(path.nodes),
                        time_pressure_ratio=ratio,
                        pending_steps=pending,
                    )
                )
                score = aggregate_workload(workload)
                pif_state = self._assessor.assess(step, path, score, ratio)
                cognition_risk = compute_p_c(step, pif_state, scenario.risk_model)
            except ProcGateError as exc:
                raise type(exc)(f"step {step.id!r}: {exc}") from exc

            ev = scenario.evidence
            evidence = {
                "TimePressure": "high" if time_risk >= ev.p_t_high else "low",
                "CognitiveLoad": "high" if score >= ev.workload_high else "low",
                "PIFSeverity": "high" if cognition_risk >= ev.p_c_high else "low",
                "Confusion": "true" if confusion else "false",
            }
            action_risk = infer(scenario.network, evidence)
            factors = tuple(
                {"factor": f"pif:{pif}", "level": level}
                for pif, level in pif_state.as_dict().items()
            ) + (
                {"factor": "p_t", "value": time_risk, "t_avail_s": t_avail_s,
                 "median_s": median},
                {"factor": "p_c", "value": cognition_risk},
                {"factor": "workload_score", "value": score},
            ) + tuple(
                {"factor": f"evidence:{node}", "state": state}
                for node, state in evidence.items()
            )
            decision = decide(action_risk, scenario.thresholds, factors)
            assessment = RiskAssessment(
                step_id=step.id,
                p_t=time_risk,
                p_c=cognition_risk,
                step_hep=fuse_step_hep(time_risk, cognition_risk),
                workload_score=score,
                confusion=confusion,
                action_risk=action_risk,
                decision=decision,
            )
            if step.lifecycle is Lifecycle.PENDING:
                mark_intended(step)
            self.assessments.append(assessment)
            self._latest[step.id] = assessment
            self.audit.append(
                self.clock,
                "step_evaluated",
                step_id=step.id,
                p_t=assessment.p_t,
                p_c=assessment.p_c,
                step_hep=assessment.step_hep,
                action_risk=assessment.action_risk,
                workload_score=assessment.workload_score,
                verdict=decision.verdict.value,
                explanation=decision.explanation,
            )
            if decision.verdict is Verdict.ALLOW:
                if scenario.auto_execute_allow:
                    self._execute(step, actor="system")
            else:
                self._issue_token(step, assessment)
            return assessment

    def _issue_token(self, step: ProcedureStep, assessment: RiskAssessment) -> ApprovalToken:
        for approval_id in [
            a for a, t in self.pending_approvals.items() if t.step_id == step.id
        ]:  # one live token per step
            del self.pending_approvals[approval_id]
            self.audit.append(
                self.clock,
                "approval_cancelled",
                step_id=step.id,
                payload={"approval_id": approval_id, "reason": "superseded by re-evaluation"},
            )
        ordinal = self._approval_ordinal
        self._approval_ordinal += 1
        token = ApprovalToken(
            approval_id=f"APR-{ordinal + 1:04d}",
            step_id=step.id,
            ordinal=ordinal,
            issued_at=self.clock,
            expires_at=self.clock + self.scenario.approval_expiry_ticks,
            assessment=assessment,
        )
        self.pending_approvals[token.approval_id] = token
        self.audit.append(
            self.clock,
            "approval_issued",
            step_id=step.id,
            verdict=assessment.decision.verdict.value,
            payload={
                "approval_id": token.approval_id,
                "ordinal": ordinal,
                "expires_at": token.expires_at,
            },
        )
        return token

    def _execute(self, step: ProcedureStep, actor: str) -> None:
        mark_executed(step)
        self.audit.append(
            self.clock,
            "step_executed",
            step_id=step.id,
            actor=actor,
            verdict=self._latest[step.id].decision.verdict.value,
        )
        if step.kind is StepKind.CHECKLIST:
            items = self.scenario.checklists.get(step.id)
            if items:
                mismatches = verify_checklist(items, self.scenario.observed_states)
                self.audit.append(
                    self.clock,
                    "checklist_verified",
                    step_id=step.id,
                    payload={
                        "passed": not mismatches,
                        "mismatches": [
                            {
                                "valve_code": m.valve_code,
                                "expected": m.expected.value,
                                "observed": m.observed.value if m.observed else None,
                            }
                            for m in mismatches
                        ],
                    },
                )

    # -- gate --------------------------------------------------------------

    def submit_approval(self, approval_id: str, decision: str) -> None:
        """Resolve a pending approval as the human operator."""
        if decision not in ("approved", "rejected"):
            raise ValueError(f"decision must be approved|rejected, got {decision!r}")
        with self._lock:
            token = self.pending_approvals.get(approval_id)
            if token is None:
                raise UnknownApprovalError(f"no live approval {approval_id!r}")
            if self.clock > token.expires_at:
                del self.pending_approvals[approval_id]
                self.audit.append(
                    self.clock,
                    "approval_expired",
                    step_id=token.step_id,
                    payload={"approval_id": approval_id, "expired_at": token.expires_at},
                )
                raise ExpiredApprovalError(
                    f"approval {approval_id!r} expired at tick {token.expires_at}"
                )
            del self.pending_approvals[approval_id]
            step = next(s for s in self.steps if s.id == token.step_id)
            self.audit.append(
                self.clock,
                "approval_resolved",
                step_id=step.id,
                actor="human",
                operator_action=decision,
                verdict=token.assessment.decision.verdict.value,
                payload={"approval_id": approval_id, "ordinal": token.ordinal},
            )
            if decision == "approved":
                self._execute(step, actor="system")

    def execute_current_step(self) -> None:
        """Manually execute an Allow-verdict step (operator acted themselves).

        Only relevant when auto_execute_allow is off; gated steps must go
        through submit_approval instead.
        """
        with self._lock:
            step = self.current_step()
            assessment = self._latest.get(step.id)
            if assessment is None or assessment.decision.verdict is not Verdict.ALLOW:
                raise NoActiveStepError(
                    f"step {step.id!r} has no Allow verdict; approval required"
                )
            self._execute(step, actor="human")

    # -- advance -------------------------------------------------------------

    def current_systemic_hep(self) -> float:
        heps = [
            self._latest[s.id].step_hep
            for s in self.steps
            if s.lifecycle is Lifecycle.EXECUTED and s.id in self._latest
        ]
        return systemic_hep(heps)

    def _audit_systemic(self) -> None:
        executed = [
            {"step_id": s.id, "step_hep": self._latest[s.id].step_hep}
            for s in self.steps
            if s.lifecycle is Lifecycle.EXECUTED and s.id in self._latest
        ]
        self.audit.append(
            self.clock,
            "systemic_hep",
            payload={
                "value": systemic_hep([e["step_hep"] for e in executed]),
                "steps": executed,
            },
        )

    def _maybe_complete(self) -> None:
        if self.cursor >= len(self.steps):
            self.mode = RunMode.COMPLETED
            self.audit.append(
                self.clock,
                "procedure_completed",
                payload={
                    "procedure": self.procedure_name,
                    "systemic_hep": self.current_systemic_hep(),
                },
            )

    def advance(self) -> None:
        """Move past an executed step, refreshing the systemic HEP."""
        with self._lock:
            step = self.current_step()
            if step.lifecycle is not Lifecycle.EXECUTED:
                raise StepNotExecutedError(
                    f"step {step.id!r} is {step.lifecycle.value}, not Executed"
                )
            self.cursor += 1
            self._audit_systemic()
            self._maybe_complete()

    def skip_step(self, reason: str) -> None:
        """Pass over a step that will not execute (e.g. after a rejection).

        The step keeps its lifecycle (never Executed); any still-live token
        for it is cancelled so no stale approval can fire later.
        """
        with self._lock:
            step = self.current_step()
            if step.lifecycle is Lifecycle.EXECUTED:
                raise ProcGateError(f"step {step.id!r} executed; use advance()")
            for approval_id in [
                a for a, t in self.pending_approvals.items() if t.step_id == step.id
            ]:
                del self.pending_approvals[approval_id]
                self.audit.append(
                    self.clock,
                    "approval_cancelled",
                    step_id=step.id,
                    payload={"approval_id": approval_id, "reason": reason},
                )
            self.cursor += 1
            self.audit.append(
                self.clock,
                "step_skipped",
                step_id=step.id,
                payload={"reason": reason},
            )
            self._maybe_complete()

    # -- snapshots -------------------------------------------------------------

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "mode": self.mode.value,
                "clock": self.clock,
                "active_event": (
                    {
                        "event_id": self.active_event.event_id,
                        "name": self.active_event.name,
                        "distance": self.active_event.distance,
                        "detected_at": self.active_event.detected_at,
                    }
                    if self.active_event
                    else None
                ),
                "procedure": (
                    {
                        "name": self.procedure_name,
                        "cursor": self.cursor,
                        "steps": [
                            {
                                "id": s.id,
                                "kind": s.kind.value,
                                "text": s.text,
                                "lifecycle": s.lifecycle.value,
                                "verdict": (
                                    self._latest[s.id].decision.verdict.value
                                    if s.id in self._latest
                                    else None
                                ),
                            }
                            for s in self.steps
                        ],
                    }
                    if self.procedure_name
                    else None
                ),
                "pending_approvals": [
                    {
                        "approval_id": t.approval_id,
                        "step_id": t.step_id,
                        "ordinal": t.ordinal,
                        "issued_at": t.issued_at,
                        "expires_at": t.expires_at,
                        "assessment": t.assessment.to_dict(),
                    }
                    for t in self.pending_approvals.values()
                ],
                "systemic_hep": self.current_systemic_hep(),
                "audit_seq": self.audit.last_seq(),
            }

    def procedure_view(self) -> dict:
        with self._lock:
            return {
                "name": self.procedure_name,
                "cursor": self.cursor,
                "steps": [
                    {
                        "id": s.id,
                        "kind": s.kind.value,
                        "text": s.text,
                        "targets": list(s.targets),
                        "lifecycle": s.lifecycle.value,
                        "verdict": (
                            self._latest[s.id].decision.verdict.value
                            if s.id in self._latest
                            else None
                        ),
                        "path": (
                            {
                                "multi_action": self._paths[s.id].multi_action,
                                "nodes": [
                                    {
                                        "element_id": n.element_id,
                                        "x": n.x,
                                        "y": n.y,
                                        "action": n.action.value,
                                    }
                                    for n in self._paths[s.id].nodes
                                ],
                            }
                            if s.id in self._paths
                            else None
                        ),
                    }
                    for s in self.steps
                ],
            }


# -- scripted replay -------------------------------------------------------

class ScriptedApprovals:
    """Approval decisions for headless replay, keyed by issue ordinal.

    The script is a JSON list of ``{"ordinal": <int or "*">, "decision":
    "approved"|"rejected"}``; a ``"*"`` ordinal is the catch-all for
    anything without an explicit entry.
    """

    def __init__(self, entries: list[dict] | None) -> None:
        self._by_ordinal: dict[int, str] = {}
        self._default: str | None = None
        for entry in entries or []:
            decision = entry["decision"]
            if decision not in ("approved", "rejected"):
                raise ValueError(f"bad approvals script decision {decision!r}")
            ordinal = entry["ordinal"]
            if ordinal == "*":
                self._default = decision
            else:
                self._by_ordinal[int(ordinal)] = decision

    @classmethod
    def approve_all(cls) -> "ScriptedApprovals":
        return cls([{"ordinal": "*", "decision": "approved"}])

    @classmethod
    def reject_all(cls) -> "ScriptedApprovals":
        return cls([{"ordinal": "*", "decision": "rejected"}])

    def decision_for(self, ordinal: int) -> str | None:
        return self._by_ordinal.get(ordinal, self._default)


def run_replay(
    scenario: Scenario,
    frames: list[TelemetryFrame],
    approvals: ScriptedApprovals | None = None,
    audit_sink: IO[str] | None = None,
) -> tuple[Runtime, dict]:
    """Headless end-to-end replay; returns the runtime and its run report.

    Telemetry is fed until an event activates a procedure, then dribbled in
    per-step batches while the gate loop runs. Gated steps consult the
    approvals script: approved executes them, rejected skips them, and a
    missing entry stalls the replay with an audit record (nothing executes
    without an answer).
    """
    approvals = approvals or ScriptedApprovals(None)
    runtime = Runtime(scenario, audit_sink=audit_sink)
    batch = max(1, scenario.replay_frames_per_step)
    position = 0

    def feed() -> None:
        nonlocal position
        if position < len(frames):
            runtime.tick(frames[position:position + batch])
            position += batch

    while runtime.mode is RunMode.IDLE and position < len(frames):
        feed()

    stalled = False
    while runtime.mode is RunMode.EVENT_ACTIVE and not stalled:
        feed()
        assessment = runtime.evaluate_current_step()
        if assessment.decision.verdict is Verdict.ALLOW:
            if runtime.steps[runtime.cursor].lifecycle is Lifecycle.EXECUTED:
                runtime.advance()
            else:  # manual-execution configs leave Allow steps to the operator
                runtime.skip_step(reason="allow verdict, manual execution required")
        else:
            token = [
                t for t in runtime.pending_approvals.values()
                if t.step_id == assessment.step_id
            ][-1]
            decision = approvals.decision_for(token.ordinal)
            if decision is None:
                runtime.audit.append(
                    runtime.clock,
                    "replay_stalled",
                    step_id=token.step_id,
                    payload={
                        "approval_id": token.approval_id,
                        "ordinal": token.ordinal,
                        "reason": "no scripted decision",
                    },
                )
                stalled = True
            else:
                runtime.submit_approval(token.approval_id, decision)
                if decision == "approved":
                    runtime.advance()
                else:
                    runtime.skip_step(reason="approval rejected")

    report = {
        "scenario_id": scenario.scenario_id,
        "detected_event": (
            {
                "event_id": runtime.active_event.event_id,
                "name": runtime.active_event.name,
                "detected_at": runtime.active_event.detected_at,
            }
            if runtime.active_event
            else None
        ),
        "procedure": runtime.procedure_name,
        "completed": runtime.mode is RunMode.COMPLETED,
        "stalled": stalled,
        "steps": [
            {
                "step_id": a.step_id,
                "p_t": a.p_t,
                "p_c": a.p_c,
                "step_hep": a.step_hep,
                "action_risk": a.action_risk,
                "verdict": a.decision.verdict.value,
                "lifecycle": next(
                    s.lifecycle.value for s in runtime.steps if s.id == a.step_id
                ),
            }
            for a in runtime.assessments
        ],
        "systemic_hep": runtime.current_systemic_hep(),
    }
    return runtime, report
