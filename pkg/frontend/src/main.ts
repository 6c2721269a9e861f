// Browser bootstrap: single rendering loop over the store, with approval
// clicks delegated to the cards panel. Decisions wait for the server's
// acknowledgment; there is no optimistic UI.

import { ApiClient } from "./api.js";
import { renderAudit, renderBanner, renderCards, renderMap, renderSteps, renderTrajectory } from "./render.js";
import { ConsoleStore } from "./store.js";
import type { Decision } from "./types.js";

const api = new ApiClient(window.location.origin);
const store = new ConsoleStore(api);

function paint(): void {
  const sections: Array<[string, (s: typeof store.state) => string]> = [
    ["banner", () => renderBanner(store.state)],
    ["steps", () => renderSteps(store.state)],
    ["cards", () => renderCards(store.state)],
    ["trajectory", () => renderTrajectory(store.state)],
    ["map", () => renderMap(store.state)],
    ["audit", () => renderAudit(store.state)],
  ];
  for (const [id, render] of sections) {
    const el = document.getElementById(id);
    if (el) el.innerHTML = render(store.state);
  }
}

let repaintQueued = false;
store.onChange(() => {
  if (repaintQueued) return;
  repaintQueued = true;
  requestAnimationFrame(() => {
    repaintQueued = false;
    paint();
  });
});

document.getElementById("cards")?.addEventListener("click", (event) => {
  const button = (event.target as HTMLElement).closest<HTMLButtonElement>("button[data-approval-id]");
  if (!button || button.disabled) return;
  const approvalId = button.dataset.approvalId as string;
  const decision = button.dataset.decision as Decision;
  void store.submitDecision(approvalId, decision);
});

void store.init().then(paint);
