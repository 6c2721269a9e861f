// Wire types mirroring the runtime's JSON API field for field.
// The console never derives risk numbers itself; everything rendered is
// traceable to one of these payloads.

export type Verdict = "Allow" | "Suggest" | "Block";
export type LifecycleStage = "Pending" | "Intended" | "Executed";
export type Decision = "approved" | "rejected";

export interface ExplanationFactor {
  factor: string;
  level?: string;
  state?: string;
  value?: number;
  [extra: string]: unknown;
}

export interface AssessmentPayload {
  step_id: string;
  p_t: number;
  p_c: number;
  step_hep: number;
  workload_score: number;
  confusion: boolean;
  action_risk: number;
  verdict: Verdict;
  approval_required: boolean;
  explanation: ExplanationFactor[];
}

export interface PendingApproval {
  approval_id: string;
  step_id: string;
  ordinal: number;
  issued_at: number;
  expires_at: number;
  assessment: AssessmentPayload;
}

export interface StateSnapshot {
  mode: "Idle" | "EventActive" | "Completed";
  clock: number;
  active_event: {
    event_id: string;
    name: string;
    distance: number;
    detected_at: number;
  } | null;
  procedure: {
    name: string;
    cursor: number;
    steps: { id: string; kind: string; text: string; lifecycle: LifecycleStage; verdict: Verdict | null }[];
  } | null;
  pending_approvals: PendingApproval[];
  systemic_hep: number;
  audit_seq: number;
}

export interface PathNodePayload {
  element_id: string;
  x: number;
  y: number;
  action: string;
}

export interface ProcedureStepPayload {
  id: string;
  kind: string;
  text: string;
  targets: string[];
  lifecycle: LifecycleStage;
  verdict: Verdict | null;
  path: { multi_action: boolean; nodes: PathNodePayload[] } | null;
}

export interface ProcedureView {
  name: string | null;
  cursor: number;
  steps: ProcedureStepPayload[];
}

export interface AuditRecord {
  seq: number;
  tick: number;
  kind: string;
  actor: "system" | "human";
  operator_action: "none" | Decision;
  step_id: string | null;
  p_t: number | null;
  p_c: number | null;
  step_hep: number | null;
  action_risk: number | null;
  workload_score: number | null;
  verdict: Verdict | null;
  explanation: ExplanationFactor[];
  payload: Record<string, unknown>;
}
