// Thin HTTP client for the runtime console API, plus a reconnecting
// server-sent-events reader built on fetch streaming so the same code runs
// in the browser and under Node for tests.

import type { AuditRecord, Decision, ProcedureView, StateSnapshot } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: { error?: string; [k: string]: unknown },
  ) {
    super(body.error ?? `http ${status}`);
  }
}

export class ApiClient {
  constructor(public baseUrl: string) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await fetch(this.baseUrl + path);
    if (!resp.ok) throw new ApiError(resp.status, await resp.json().catch(() => ({})));
    return (await resp.json()) as T;
  }

  state(): Promise<StateSnapshot> {
    return this.getJson<StateSnapshot>("/state");
  }

  procedure(): Promise<ProcedureView> {
    return this.getJson<ProcedureView>("/procedure");
  }

  async audit(since = 0): Promise<AuditRecord[]> {
    const body = await this.getJson<{ records: AuditRecord[] }>(`/audit?since=${since}`);
    return body.records;
  }

  async submitDecision(approvalId: string, decision: Decision): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/approvals/${approvalId}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ decision }),
    });
    if (!resp.ok) throw new ApiError(resp.status, await resp.json().catch(() => ({})));
  }
}

export interface StreamHandle {
  close(): void;
}

/**
 * Tail the audit event stream, invoking onRecord once per record.
 * On any disconnect it reconnects with ?since=<last seen seq>, so records
 * are never delivered twice; lastSeq() reports resume progress.
 */
export function streamEvents(
  baseUrl: string,
  onRecord: (record: AuditRecord) => void,
  options: { since?: number; onError?: (err: unknown) => void } = {},
): StreamHandle & { lastSeq(): number } {
  let since = options.since ?? 0;
  let closed = false;
  let controller = new AbortController();

  async function pump(): Promise<void> {
    while (!closed) {
      controller = new AbortController();
      try {
        const resp = await fetch(`${baseUrl}/events?since=${since}`, {
          signal: controller.signal,
        });
        if (!resp.ok || resp.body === null) throw new Error(`stream http ${resp.status}`);
        const reader = resp.body.getReader();
        const decoder = new TextDecoder();
        let buffer = "";
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          let boundary;
          while ((boundary = buffer.indexOf("\n\n")) >= 0) {
            const chunk = buffer.slice(0, boundary);
            buffer = buffer.slice(boundary + 2);
            const dataLine = chunk.split("\n").find((l) => l.startsWith("data: "));
            if (!dataLine) continue;
            const record = JSON.parse(dataLine.slice("data: ".length)) as AuditRecord;
            if (record.seq <= since) continue; // replay overlap guard
            since = record.seq;
            onRecord(record);
          }
        }
      } catch (err) {
        if (closed) return;
        options.onError?.(err);
        await new Promise((r) => setTimeout(r, 250));
      }
    }
  }

  void pump();
  return {
    close() {
      closed = true;
      controller.abort();
    },
    lastSeq() {
      return since;
    },
  };
}
