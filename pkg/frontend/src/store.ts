// Console state container. Everything here is a projection of API payloads:
// audit records append-only from the event stream, snapshots from /state and
// /procedure. No risk value is ever computed client-side, and approvals are
// never applied optimistically; cards move only on server acknowledgment and
// badges only on stream records.

import { ApiClient, ApiError, streamEvents, type StreamHandle } from "./api.js";
import type {
  AssessmentPayload,
  AuditRecord,
  Decision,
  ExplanationFactor,
  ProcedureStepPayload,
  StateSnapshot,
} from "./types.js";

export interface ApprovalCard {
  approvalId: string;
  stepId: string;
  stepText: string;
  verdict: string;
  pT: number;
  pC: number;
  actionRisk: number;
  explanation: ExplanationFactor[];
  expiresAt: number;
  submitting: boolean;
  error: string | null;
}

export interface TrajectoryPoint {
  tick: number;
  actionRisk: number;
  stepId: string;
  verdict: string;
}

export interface SystemicPoint {
  tick: number;
  value: number;
}

export interface ConsoleState {
  connected: boolean;
  schemaError: string | null;
  mode: string;
  clock: number;
  banner: { name: string; eventId: string; detectedAt: number } | null;
  procedureName: string | null;
  cursor: number;
  steps: ProcedureStepPayload[];
  cards: ApprovalCard[];
  trajectory: TrajectoryPoint[];
  systemic: SystemicPoint[];
  auditRows: AuditRecord[];
  notices: string[];
  lastSeq: number;
}

const TRAJECTORY_WINDOW = 500;
const AUDIT_ROWS_SHOWN = 200;

export function emptyState(): ConsoleState {
  return {
    connected: false,
    schemaError: null,
    mode: "Idle",
    clock: 0,
    banner: null,
    procedureName: null,
    cursor: 0,
    steps: [],
    cards: [],
    trajectory: [],
    systemic: [],
    auditRows: [],
    notices: [],
    lastSeq: 0,
  };
}

export function validateSnapshot(payload: unknown): StateSnapshot {
  const snap = payload as StateSnapshot;
  if (
    typeof snap !== "object" ||
    snap === null ||
    !["Idle", "EventActive", "Completed"].includes(snap.mode) ||
    typeof snap.clock !== "number" ||
    !Array.isArray(snap.pending_approvals)
  ) {
    throw new Error("state payload does not match the expected schema");
  }
  return snap;
}

export class ConsoleStore {
  state: ConsoleState = emptyState();
  private stream: StreamHandle | null = null;
  private listeners: Array<() => void> = [];
  private latestAssessment = new Map<string, AssessmentPayload>();

  constructor(
    private api: ApiClient,
    private trajectoryWindow = TRAJECTORY_WINDOW,
  ) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async init(): Promise<void> {
    await this.refreshSnapshot();
    await this.refreshProcedure();
    this.stream = streamEvents(this.api.baseUrl, (record) => this.applyRecord(record), {
      since: 0,
      onError: () => {
        this.state.connected = false;
        this.emit();
      },
    });
    this.state.connected = true;
    this.emit();
  }

  close(): void {
    this.stream?.close();
  }

  async refreshSnapshot(): Promise<void> {
    try {
      const snap = validateSnapshot(await this.api.state());
      this.state.schemaError = null;
      this.state.mode = snap.mode;
      this.state.clock = snap.clock;
      if (snap.active_event) {
        this.state.banner = {
          name: snap.active_event.name,
          eventId: snap.active_event.event_id,
          detectedAt: snap.active_event.detected_at,
        };
      }
      for (const pending of snap.pending_approvals) {
        this.latestAssessment.set(pending.step_id, pending.assessment);
        this.upsertCard(pending.approval_id, pending.step_id, pending.expires_at);
      }
    } catch (err) {
      this.state.schemaError = String(err instanceof Error ? err.message : err);
    }
    this.emit();
  }

  async refreshProcedure(): Promise<void> {
    const view = await this.api.procedure();
    this.state.procedureName = view.name;
    this.state.cursor = view.cursor;
    this.state.steps = view.steps;
    this.emit();
  }

  stepText(stepId: string): string {
    return this.state.steps.find((s) => s.id === stepId)?.text ?? stepId;
  }

  private upsertCard(approvalId: string, stepId: string, expiresAt: number): void {
    if (this.state.cards.some((c) => c.approvalId === approvalId)) return;
    const assessment = this.latestAssessment.get(stepId);
    this.state.cards.push({
      approvalId,
      stepId,
      stepText: this.stepText(stepId),
      verdict: assessment?.verdict ?? "Suggest",
      pT: assessment?.p_t ?? NaN,
      pC: assessment?.p_c ?? NaN,
      actionRisk: assessment?.action_risk ?? NaN,
      explanation: assessment?.explanation ?? [],
      expiresAt,
      submitting: false,
      error: null,
    });
  }

  private removeCard(approvalId: string): void {
    this.state.cards = this.state.cards.filter((c) => c.approvalId !== approvalId);
  }

  private setStepState(stepId: string, lifecycle?: string, verdict?: string): void {
    const step = this.state.steps.find((s) => s.id === stepId);
    if (!step) return;
    if (lifecycle) step.lifecycle = lifecycle as ProcedureStepPayload["lifecycle"];
    if (verdict) step.verdict = verdict as ProcedureStepPayload["verdict"];
  }

  applyRecord(record: AuditRecord): void {
    if (record.seq <= this.state.lastSeq) return; // reconnect duplicates
    this.state.lastSeq = record.seq;
    this.state.clock = record.tick;
    this.state.auditRows.push(record);
    if (this.state.auditRows.length > AUDIT_ROWS_SHOWN) {
      this.state.auditRows = this.state.auditRows.slice(-AUDIT_ROWS_SHOWN);
    }

    switch (record.kind) {
      case "event_detected": {
        const payload = record.payload as { name: string; event_id: string; detected_at: number };
        this.state.banner = {
          name: payload.name,
          eventId: payload.event_id,
          detectedAt: payload.detected_at,
        };
        break;
      }
      case "procedure_activated":
        this.state.mode = "EventActive";
        void this.refreshProcedure();
        break;
      case "step_evaluated": {
        if (record.step_id && record.action_risk !== null) {
          this.latestAssessment.set(record.step_id, {
            step_id: record.step_id,
            p_t: record.p_t ?? NaN,
            p_c: record.p_c ?? NaN,
            step_hep: record.step_hep ?? NaN,
            workload_score: record.workload_score ?? NaN,
            confusion: false,
            action_risk: record.action_risk,
            verdict: (record.verdict ?? "Suggest") as AssessmentPayload["verdict"],
            approval_required: record.verdict !== "Allow",
            explanation: record.explanation,
          });
          this.setStepState(record.step_id, "Intended", record.verdict ?? undefined);
          this.state.trajectory.push({
            tick: record.tick,
            actionRisk: record.action_risk,
            stepId: record.step_id,
            verdict: record.verdict ?? "",
          });
          if (this.state.trajectory.length > this.trajectoryWindow) {
            this.state.trajectory = this.state.trajectory.slice(-this.trajectoryWindow);
          }
        }
        break;
      }
      case "approval_issued": {
        const payload = record.payload as { approval_id: string; expires_at: number };
        if (record.step_id) {
          this.upsertCard(payload.approval_id, record.step_id, payload.expires_at);
        }
        break;
      }
      case "approval_resolved":
      case "approval_cancelled":
      case "approval_expired": {
        const payload = record.payload as { approval_id: string };
        this.removeCard(payload.approval_id);
        break;
      }
      case "step_executed":
        if (record.step_id) this.setStepState(record.step_id, "Executed");
        break;
      case "step_skipped":
        if (record.step_id) {
          this.state.notices.push(`step ${record.step_id} skipped (not executed)`);
        }
        break;
      case "systemic_hep": {
        const payload = record.payload as { value: number };
        this.state.systemic.push({ tick: record.tick, value: payload.value });
        break;
      }
      case "procedure_completed":
        this.state.mode = "Completed";
        break;
      case "checklist_verified": {
        const payload = record.payload as { passed: boolean; mismatches: unknown[] };
        this.state.notices.push(
          payload.passed
            ? `checklist ${record.step_id} verified clean`
            : `checklist ${record.step_id}: ${payload.mismatches.length} mismatches`,
        );
        break;
      }
      default:
        break;
    }
    this.emit();
  }

  /**
   * Round-trip an approval decision. The card is removed only once the
   * server acknowledges; on a server-side error the message is surfaced
   * inline on that card and every other card is left untouched.
   */
  async submitDecision(approvalId: string, decision: Decision): Promise<boolean> {
    const card = this.state.cards.find((c) => c.approvalId === approvalId);
    if (card) {
      card.submitting = true;
      card.error = null;
      this.emit();
    }
    try {
      await this.api.submitDecision(approvalId, decision);
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      const still = this.state.cards.find((c) => c.approvalId === approvalId);
      if (still) {
        still.submitting = false;
        still.error = message;
      }
      // also keep it in the notices feed: a racing resolution may remove
      // the card before the operator reads the inline message
      this.state.notices.push(`approval ${approvalId}: ${message}`);
      this.emit();
      return false;
    }
    this.removeCard(approvalId);
    this.emit();
    return true;
  }
}
