// Round-trip acceptance test: a real runtime server, the real API client,
// and the store driving approvals exactly as the UI buttons would.

import { spawn, type ChildProcess } from "node:child_process";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { ConsoleStore } from "../src/store.js";

const REPO_ROOT = path.resolve(__dirname, "..", "..");
let server: ChildProcess;
let store: ConsoleStore;
let api: ApiClient;

async function waitFor<T>(
  probe: () => T | undefined | false,
  what: string,
  timeoutMs = 30_000,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((r) => setTimeout(r, 25));
  }
}

beforeAll(async () => {
  server = spawn(
    "python3",
    [
      "-m", "procgate.cli", "serve",
      "--scenario", "fixtures/shutdown/scenario.json",
      "--port", "0",
      "--step-interval", "0",
    ],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  const port = await new Promise<number>((resolve, reject) => {
    let buffer = "";
    const timer = setTimeout(() => reject(new Error("server did not announce a port")), 20_000);
    server.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/listening on http:\/\/127\.0\.0\.1:(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(Number(match[1]));
      }
    });
    server.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
  });
  api = new ApiClient(`http://127.0.0.1:${port}`);
  store = new ConsoleStore(api);
  await store.init();
}, 40_000);

afterAll(() => {
  store?.close();
  server?.kill("SIGTERM");
});

function stepOf(id: string) {
  return store.state.steps.find((s) => s.id === id)!;
}

describe("console round-trip against a served scenario", () => {
  it("shows an approval card for the first Suggest verdict", async () => {
    const card = await waitFor(() => store.state.cards[0], "first approval card");
    expect(card.verdict).toBe("Suggest");
    expect(card.stepId).toBe("FE-1");
    expect(Number.isFinite(card.pT)).toBe(true);
    expect(Number.isFinite(card.pC)).toBe(true);
    expect(card.explanation.length).toBeGreaterThan(0);
    expect(store.state.banner?.name).toBe("Disconnection of Generator to 6kV 1B Bus bar");
  });

  it("approve click executes the step within one stream update", async () => {
    const card = store.state.cards[0];
    const seqBefore = store.state.lastSeq;
    const ok = await store.submitDecision(card.approvalId, "approved");
    expect(ok).toBe(true);
    expect(store.state.cards.find((c) => c.approvalId === card.approvalId)).toBeUndefined();
    await waitFor(
      () => stepOf("FE-1").lifecycle === "Executed",
      "FE-1 badge to reach Executed",
    );
    // the badge moved because the stream delivered the execution record
    const executed = store.state.auditRows.find(
      (r) => r.kind === "step_executed" && r.step_id === "FE-1",
    );
    expect(executed).toBeDefined();
    expect(executed!.seq).toBeGreaterThan(seqBefore);
    const resolved = store.state.auditRows.find(
      (r) => r.kind === "approval_resolved" && r.step_id === "FE-1",
    );
    expect(resolved?.actor).toBe("human");
  });

  it("reject click leaves the step Intended", async () => {
    const card = await waitFor(
      () => store.state.cards.find((c) => c.stepId === "FE-3"),
      "FE-3 approval card",
    );
    const ok = await store.submitDecision(card.approvalId, "rejected");
    expect(ok).toBe(true);
    await waitFor(
      () => store.state.auditRows.some((r) => r.kind === "step_skipped" && r.step_id === "FE-3"),
      "FE-3 skip record",
    );
    expect(stepOf("FE-3").lifecycle).toBe("Intended");
    expect(stepOf("FE-3").verdict).toBe("Suggest");
  });

  it("double-submit surfaces an inline error without corrupting other cards", async () => {
    const card = await waitFor(
      () => store.state.cards.find((c) => c.stepId === "NAV-1"),
      "NAV-1 approval card",
    );
    expect(card.verdict).toBe("Block");
    const [first, second] = await Promise.all([
      store.submitDecision(card.approvalId, "approved"),
      store.submitDecision(card.approvalId, "approved"),
    ]);
    expect([first, second].filter(Boolean)).toHaveLength(1);
    const surfaced =
      store.state.notices.some((n) => n.includes("unknown-approval")) ||
      store.state.cards.some((c) => c.error?.includes("unknown-approval"));
    expect(surfaced).toBe(true);
    // the board stays coherent: NAV-1 executes, later cards keep arriving
    await waitFor(() => stepOf("NAV-1").lifecycle === "Executed", "NAV-1 executed");
    const nextCard = await waitFor(
      () => store.state.cards.find((c) => c.stepId !== "NAV-1"),
      "a later approval card",
    );
    expect(nextCard.error).toBeNull();
  });

  it("runs the remaining steps to completion on approvals", async () => {
    for (;;) {
      if (store.state.mode === "Completed") break;
      const card = store.state.cards[0];
      if (card) {
        await store.submitDecision(card.approvalId, "approved");
      }
      await new Promise((r) => setTimeout(r, 20));
    }
    expect(store.state.systemic.length).toBeGreaterThan(0);
    const lifecycleByStep = new Map(store.state.steps.map((s) => [s.id, s.lifecycle]));
    expect(lifecycleByStep.get("FE-3")).toBe("Intended"); // the rejected one
    expect(lifecycleByStep.get("CHK-1")).toBe("Executed");
  }, 60_000);

  it("reconnecting resumes from the last seen seq with no duplicate rows", async () => {
    const seqs = store.state.auditRows.map((r) => r.seq);
    expect(new Set(seqs).size).toBe(seqs.length);
    const before = store.state.auditRows.length;
    const lastSeq = store.state.lastSeq;
    // simulate a reconnect replaying everything from zero
    const replay = await api.audit(0);
    for (const rec of replay) store.applyRecord(rec);
    expect(store.state.auditRows.length).toBe(before);
    expect(store.state.lastSeq).toBe(lastSeq);
  });
});
