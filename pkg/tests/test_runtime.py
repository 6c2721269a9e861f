import io
import json

import pytest

from procgate import audit as audit_mod
from procgate.config import EvidenceThresholds, Scenario
from procgate.errors import (
    ExpiredApprovalError,
    NoActiveStepError,
    StepNotExecutedError,
    UnknownApprovalError,
)
from procgate.gate import Verdict
from procgate.interface_graph import EdgeAction, ElementKind, InterfaceElement, InterfaceGraph
from procgate.perception import EventSignature, NominalStats, TelemetryFrame, window_features
from procgate.procedures import Lifecycle
from procgate.runtime import RunMode, Runtime, ScriptedApprovals, run_replay

WINDOW = 5
PARAMS = ("a", "b")
STATS = NominalStats(means={"a": 0.0, "b": 0.0}, stds={"a": 1.0, "b": 1.0})

PROCEDURE_DOC = """
[STEP S-EASY screen_navigation] Click the first control.
target: A

[STEP S-GATE screen_navigation] Walk the full chain.
target: A
target: B
target: C
"""


def frames_for(values, start=0, step=10):
    return [
        TelemetryFrame(time=start + step * i, values={"a": a, "b": b})
        for i, (a, b) in enumerate(values)
    ]


def event_frames(n=30, onset=10):
    vals = [(0.0, 0.0) if i < onset else (8.0, -4.0) for i in range(n)]
    return frames_for(vals)


def nominal_frames_local(n=20):
    return frames_for([(0.0, 0.0)] * n)


def event_signature():
    frames = event_frames()
    features = window_features(frames[: 10 + WINDOW + 3][-WINDOW:], WINDOW, STATS)
    return EventSignature(
        event_id="EV-X", name="Synthetic Transient", centroid=tuple(features), threshold=1.0
    )


def small_graph():
    g = InterfaceGraph()
    g.add_element(InterfaceElement("A", "A", ElementKind.SCREEN, 100, 100))
    g.add_element(InterfaceElement("B", "B", ElementKind.BUTTON, 600, 400, parent="A"))
    g.add_element(InterfaceElement("C", "C", ElementKind.BUTTON, 900, 800, parent="A"))
    g.add_edge("A", "B", EdgeAction.CLICK)
    g.add_edge("B", "C", EdgeAction.CLICK)
    return g


def make_scenario(**overrides):
    from procgate.config import ProcedureBinding

    defaults = dict(
        scenario_id="mini",
        graph=small_graph(),
        signatures=[event_signature()],
        nominal_stats=STATS,
        procedures={
            "EV-X": ProcedureBinding("EV-X", "Synthetic Response", PROCEDURE_DOC)
        },
        window_len=WINDOW,
        t_avail_default_s=60.0,
        t_avail_per_step_s={"S-GATE": 7.0},  # tight budget gates the chain walk
        approval_expiry_ticks=100,
        replay_frames_per_step=5,
    )
    defaults.update(overrides)
    return Scenario(**defaults)


def activated_runtime(sink=None, **overrides):
    runtime = Runtime(make_scenario(**overrides), audit_sink=sink)
    runtime.tick(event_frames())
    assert runtime.mode is RunMode.EVENT_ACTIVE
    return runtime


class TestTick:
    def test_nominal_frames_keep_idle_and_silent(self):
        runtime = Runtime(make_scenario())
        runtime.tick(nominal_frames_local())
        assert runtime.mode is RunMode.IDLE
        assert len(runtime.audit) == 0
        assert runtime.clock == nominal_frames_local()[-1].time

    def test_event_activates_procedure(self):
        runtime = activated_runtime()
        assert runtime.active_event.event_id == "EV-X"
        assert runtime.procedure_name == "Synthetic Response"
        kinds = [r.kind for r in runtime.audit.records()]
        assert kinds[:2] == ["event_detected", "procedure_activated"]

    def test_unknown_event_audited_once_and_stays_idle(self):
        runtime = Runtime(make_scenario(procedures={}))
        runtime.tick(event_frames(n=40))
        assert runtime.mode is RunMode.IDLE
        unknown = [r for r in runtime.audit.records() if r.kind == "unknown_event"]
        assert len(unknown) == 1
        assert unknown[0].payload["event_id"] == "EV-X"

    def test_broken_procedure_fails_activation_naming_the_step(self):
        from procgate.config import ProcedureBinding
        from procgate.errors import UnresolvableTargetError

        bad_doc = "[STEP S-BAD screen_navigation] go nowhere\ntarget: Zorp\n"
        scenario = make_scenario(
            procedures={"EV-X": ProcedureBinding("EV-X", "Broken", bad_doc)}
        )
        runtime = Runtime(scenario)
        with pytest.raises(UnresolvableTargetError, match="S-BAD"):
            runtime.tick(event_frames())

    def test_shutdown_fixture_activates_reactor_shutdown(
        self, shutdown_scenario, shutdown_frames
    ):
        runtime = Runtime(shutdown_scenario)
        runtime.tick(shutdown_frames[:200])
        assert runtime.mode is RunMode.EVENT_ACTIVE
        assert runtime.procedure_name == "Reactor Shutdown"
        assert runtime.active_event.name == "Disconnection of Generator to 6kV 1B Bus bar"


class TestEvaluate:
    def test_low_risk_step_allows_without_token(self):
        runtime = activated_runtime()
        assessment = runtime.evaluate_current_step()
        assert assessment.step_id == "S-EASY"
        assert assessment.decision.verdict is Verdict.ALLOW
        assert runtime.pending_approvals == {}
        assert runtime.steps[0].lifecycle is Lifecycle.EXECUTED  # auto-execute

    def test_gated_step_issues_token_with_explanation(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        assessment = runtime.evaluate_current_step()
        assert assessment.decision.verdict in (Verdict.SUGGEST, Verdict.BLOCK)
        assert len(runtime.pending_approvals) == 1
        factors = {f.get("factor") for f in assessment.decision.explanation}
        assert "p_t" in factors and "p_c" in factors
        assert any(f.startswith("evidence:") for f in factors if f)
        assert runtime.steps[1].lifecycle is Lifecycle.INTENDED

    def test_nav1_under_tight_budget_names_hsi_complexity(
        self, shutdown_scenario, shutdown_frames
    ):
        runtime = Runtime(shutdown_scenario)
        runtime.tick(shutdown_frames[:200])
        while runtime.current_step().id != "NAV-1":
            runtime.skip_step(reason="test fast-forward")
        assessment = runtime.evaluate_current_step(t_avail_s=20.0)
        assert assessment.decision.verdict in (Verdict.SUGGEST, Verdict.BLOCK)
        assert {"factor": "pif:hsi_complexity", "level": "high"} in list(
            assessment.decision.explanation
        )

    def test_cursor_past_end_is_error(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.skip_step(reason="skipping gated step")
        assert runtime.mode is RunMode.COMPLETED
        with pytest.raises(NoActiveStepError):
            runtime.evaluate_current_step()

    def test_idle_mode_cannot_evaluate(self):
        runtime = Runtime(make_scenario())
        with pytest.raises(NoActiveStepError):
            runtime.evaluate_current_step()


class TestApprovals:
    def test_approve_executes_and_consumes(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.evaluate_current_step()
        (approval_id,) = runtime.pending_approvals
        runtime.submit_approval(approval_id, "approved")
        assert runtime.pending_approvals == {}
        assert runtime.steps[1].lifecycle is Lifecycle.EXECUTED

    def test_double_approve_is_unknown(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.evaluate_current_step()
        (approval_id,) = runtime.pending_approvals
        runtime.submit_approval(approval_id, "approved")
        with pytest.raises(UnknownApprovalError):
            runtime.submit_approval(approval_id, "approved")

    def test_reject_leaves_step_intended(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.evaluate_current_step()
        (approval_id,) = runtime.pending_approvals
        runtime.submit_approval(approval_id, "rejected")
        assert runtime.steps[1].lifecycle is Lifecycle.INTENDED
        assert runtime.pending_approvals == {}

    def test_rejected_step_is_reevaluable(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.evaluate_current_step()
        (approval_id,) = runtime.pending_approvals
        runtime.submit_approval(approval_id, "rejected")
        again = runtime.evaluate_current_step()
        assert again.step_id == "S-GATE"
        assert len(runtime.pending_approvals) == 1

    def test_expired_token_rejected_and_consumed(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.evaluate_current_step()
        (approval_id,) = runtime.pending_approvals
        expiry = runtime.pending_approvals[approval_id].expires_at
        runtime.tick([TelemetryFrame(time=expiry + 1, values={"a": 0.0, "b": 0.0})])
        with pytest.raises(ExpiredApprovalError):
            runtime.submit_approval(approval_id, "approved")
        assert runtime.pending_approvals == {}
        assert runtime.steps[1].lifecycle is Lifecycle.INTENDED

    def test_unknown_id_rejected(self):
        runtime = activated_runtime()
        with pytest.raises(UnknownApprovalError):
            runtime.submit_approval("APR-9999", "approved")

    def test_bad_decision_string(self):
        runtime = activated_runtime()
        with pytest.raises(ValueError):
            runtime.submit_approval("APR-0001", "maybe")


class TestAdvance:
    def test_advance_requires_executed(self):
        runtime = activated_runtime()
        with pytest.raises(StepNotExecutedError):
            runtime.advance()

    def test_systemic_audited_on_advance(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        systemic = [r for r in runtime.audit.records() if r.kind == "systemic_hep"]
        assert len(systemic) == 1
        assert systemic[0].payload["steps"][0]["step_id"] == "S-EASY"

    def test_two_steps_with_heps_compose(self):
        # systemic over two executed HEPs must equal 1 - (1-h1)(1-h2)
        runtime = activated_runtime()
        a1 = runtime.evaluate_current_step()
        runtime.advance()
        a2 = runtime.evaluate_current_step()
        (approval_id,) = runtime.pending_approvals
        runtime.submit_approval(approval_id, "approved")
        runtime.advance()
        expected = 1 - (1 - a1.step_hep) * (1 - a2.step_hep)
        final = [r for r in runtime.audit.records() if r.kind == "systemic_hep"][-1]
        assert final.payload["value"] == pytest.approx(expected, abs=1e-15)
        assert runtime.mode is RunMode.COMPLETED

    def test_completion_record_appended(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.skip_step(reason="give up")
        kinds = [r.kind for r in runtime.audit.records()]
        assert kinds[-1] == "procedure_completed"


class TestAuditInvariants:
    def run_full(self, approvals):
        sink = io.StringIO()
        scenario = make_scenario()
        runtime, report = run_replay(scenario, event_frames(n=60), approvals, sink)
        return runtime, report, audit_mod.parse_log(sink.getvalue())

    def test_seq_gapless_and_every_transition_recorded(self):
        runtime, report, records = self.run_full(ScriptedApprovals.approve_all())
        assert audit_mod.check_seq_gapless(records)
        kinds = {r["kind"] for r in records}
        assert {"event_detected", "procedure_activated", "step_evaluated",
                "approval_issued", "approval_resolved", "step_executed",
                "systemic_hep", "procedure_completed"} <= kinds

    def test_authority_preserved_under_approve_all(self):
        _, _, records = self.run_full(ScriptedApprovals.approve_all())
        assert audit_mod.authority_violations(records) == []

    def test_authority_preserved_under_reject_all(self):
        runtime, report, records = self.run_full(ScriptedApprovals.reject_all())
        assert audit_mod.authority_violations(records) == []
        executed = [r["step_id"] for r in records if r["kind"] == "step_executed"]
        verdicts = {
            r["step_id"]: r["verdict"] for r in records if r["kind"] == "step_evaluated"
        }
        for step_id in executed:
            assert verdicts[step_id] == "Allow"

    def test_stall_without_scripted_decision(self):
        _, report, records = self.run_full(ScriptedApprovals(None))
        assert report["stalled"] is True
        assert records[-1]["kind"] == "replay_stalled"

    def test_tampered_log_detected_by_replay_checker(self):
        _, _, records = self.run_full(ScriptedApprovals.reject_all())
        # forge an execution for a gated step without any approval
        gated = next(
            r["step_id"] for r in records
            if r["kind"] == "step_evaluated" and r["verdict"] != "Allow"
        )
        forged = dict(records[-1])
        forged.update(kind="step_executed", step_id=gated, seq=len(records) + 1)
        assert audit_mod.authority_violations(records + [forged]) == [gated]

    def test_byte_identical_replays(self):
        sink_a, sink_b = io.StringIO(), io.StringIO()
        run_replay(make_scenario(), event_frames(n=60), ScriptedApprovals.approve_all(), sink_a)
        run_replay(make_scenario(), event_frames(n=60), ScriptedApprovals.approve_all(), sink_b)
        assert sink_a.getvalue() == sink_b.getvalue()
        assert len(sink_a.getvalue()) > 0


class TestManualExecutionMode:
    def test_allow_step_waits_for_manual_execution(self):
        runtime = activated_runtime(auto_execute_allow=False)
        assessment = runtime.evaluate_current_step()
        assert assessment.decision.verdict is Verdict.ALLOW
        assert runtime.steps[0].lifecycle is Lifecycle.INTENDED
        runtime.execute_current_step()
        assert runtime.steps[0].lifecycle is Lifecycle.EXECUTED
        executed = [r for r in runtime.audit.records() if r.kind == "step_executed"]
        assert executed[-1].actor == "human"

    def test_manual_execute_requires_allow_verdict(self):
        runtime = activated_runtime(auto_execute_allow=False)
        with pytest.raises(NoActiveStepError):
            runtime.execute_current_step()  # not evaluated yet

    def test_replay_skips_allow_steps_when_manual(self):
        sink = io.StringIO()
        runtime, report = run_replay(
            make_scenario(auto_execute_allow=False),
            event_frames(n=60),
            ScriptedApprovals.reject_all(),
            sink,
        )
        assert report["completed"] is True
        assert all(r["lifecycle"] != "Executed" for r in report["steps"])


class TestExplanationInvariant:
    def test_every_gated_verdict_references_evidence(self):
        sink = io.StringIO()
        run_replay(make_scenario(), event_frames(n=60),
                   ScriptedApprovals.approve_all(), sink)
        for record in audit_mod.parse_log(sink.getvalue()):
            if record["kind"] == "step_evaluated" and record["verdict"] != "Allow":
                factors = [f.get("factor", "") for f in record["explanation"]]
                assert any(f.startswith("evidence:") for f in factors)
                assert factors  # non-empty by type invariant


class TestSnapshots:
    def test_snapshot_shape(self):
        runtime = activated_runtime()
        runtime.evaluate_current_step()
        runtime.advance()
        runtime.evaluate_current_step()
        snap = runtime.snapshot()
        assert snap["mode"] == "EventActive"
        assert snap["procedure"]["cursor"] == 1
        assert snap["pending_approvals"][0]["assessment"]["step_id"] == "S-GATE"
        json.dumps(snap)  # everything must be JSON-serializable

    def test_procedure_view_carries_paths(self):
        runtime = activated_runtime()
        view = runtime.procedure_view()
        gate_step = next(s for s in view["steps"] if s["id"] == "S-GATE")
        assert [n["element_id"] for n in gate_step["path"]["nodes"]] == ["A", "B", "C"]
        assert gate_step["path"]["nodes"][0]["x"] == 100
        json.dumps(view)


class TestScriptedApprovals:
    def test_explicit_ordinals_override_wildcard(self):
        script = ScriptedApprovals(
            [{"ordinal": "*", "decision": "approved"},
             {"ordinal": 1, "decision": "rejected"}]
        )
        assert script.decision_for(0) == "approved"
        assert script.decision_for(1) == "rejected"

    def test_no_entry_means_none(self):
        script = ScriptedApprovals([{"ordinal": 0, "decision": "approved"}])
        assert script.decision_for(5) is None

    def test_bad_decision_rejected(self):
        with pytest.raises(ValueError):
            ScriptedApprovals([{"ordinal": 0, "decision": "shrug"}])
