// Pure HTML renderers over the console state. Values print verbatim from
// the store (which holds them verbatim from the API); formatting is display
// only. Returning strings keeps every view testable without a DOM.

import type { ApprovalCard, ConsoleState } from "./store.js";
import type { ExplanationFactor, ProcedureStepPayload } from "./types.js";

const SCREEN_W = 1920;
const SCREEN_H = 1080;

function esc(text: unknown): string {
  return String(text)
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmtProb(value: number): string {
  if (Number.isNaN(value)) return "-";
  if (value !== 0 && Math.abs(value) < 0.001) return value.toExponential(2);
  return value.toFixed(4);
}

export function renderBanner(state: ConsoleState): string {
  if (state.schemaError) {
    return `<div class="banner error">schema mismatch: ${esc(state.schemaError)}</div>`;
  }
  if (!state.banner) {
    return `<div class="banner nominal">No active event — monitoring telemetry (mode ${esc(
      state.mode,
    )}, tick ${state.clock})</div>`;
  }
  const done = state.mode === "Completed" ? " — procedure complete" : "";
  return `<div class="banner active">⚠ ${esc(state.banner.name)} (detected at tick ${
    state.banner.detectedAt
  })${done}</div>`;
}

function badge(step: ProcedureStepPayload): string {
  const lifecycle = step.lifecycle;
  const cls =
    lifecycle === "Executed" ? "executed" : lifecycle === "Intended" ? "intended" : "pending";
  // mirrors the physical verification-card marks: circled while intended,
  // X once executed
  const mark = lifecycle === "Executed" ? "✕" : lifecycle === "Intended" ? "◯" : "·";
  return `<span class="badge ${cls}">${mark} ${lifecycle}</span>`;
}

export function renderSteps(state: ConsoleState): string {
  if (!state.steps.length) return `<div class="empty">no procedure loaded</div>`;
  const rows = state.steps
    .map((step, i) => {
      const verdict = step.verdict
        ? `<span class="verdict ${step.verdict.toLowerCase()}">${step.verdict}</span>`
        : "";
      const current = i === state.cursor && state.mode === "EventActive" ? " current" : "";
      return `<li class="step${current}" data-step="${esc(step.id)}">
        <span class="step-id">${esc(step.id)}</span>
        ${badge(step)} ${verdict}
        <span class="step-text">${esc(step.text)}</span>
      </li>`;
    })
    .join("\n");
  return `<ol class="steps">${rows}</ol>`;
}

export function renderExplanation(factors: ExplanationFactor[]): string {
  const items = factors.map((f) => {
    const detail =
      f.level !== undefined
        ? esc(f.level)
        : f.state !== undefined
          ? esc(f.state)
          : f.value !== undefined
            ? fmtProb(Number(f.value))
            : "";
    return `<li><code>${esc(f.factor)}</code> ${detail}</li>`;
  });
  return `<ul class="explanation">${items.join("")}</ul>`;
}

export function renderCard(card: ApprovalCard): string {
  const error = card.error
    ? `<div class="card-error" role="alert">${esc(card.error)}</div>`
    : "";
  const disabled = card.submitting ? "disabled" : "";
  return `<div class="card verdict-${card.verdict.toLowerCase()}" data-approval="${esc(
    card.approvalId,
  )}">
    <div class="card-head">${esc(card.verdict)} — step ${esc(card.stepId)}</div>
    <div class="card-text">${esc(card.stepText)}</div>
    <div class="card-metrics">P_t ${fmtProb(card.pT)} · P_c ${fmtProb(card.pC)} · risk ${fmtProb(
      card.actionRisk,
    )}</div>
    ${renderExplanation(card.explanation)}
    ${error}
    <div class="card-actions">
      <button class="approve" data-approval-id="${esc(card.approvalId)}"
              data-decision="approved" ${disabled}>Approve</button>
      <button class="reject" data-approval-id="${esc(card.approvalId)}"
              data-decision="rejected" ${disabled}>Reject</button>
    </div>
  </div>`;
}

export function renderCards(state: ConsoleState): string {
  if (!state.cards.length) return `<div class="empty">no pending approvals</div>`;
  return state.cards.map(renderCard).join("\n");
}

export function renderTrajectory(state: ConsoleState): string {
  const points = state.trajectory;
  if (!points.length) return `<div class="empty">no risk samples yet</div>`;
  const w = 560;
  const h = 120;
  const ticks = points.map((p) => p.tick);
  const t0 = Math.min(...ticks);
  const t1 = Math.max(...ticks);
  const span = Math.max(1, t1 - t0);
  const x = (t: number) => ((t - t0) / span) * (w - 20) + 10;
  const y = (r: number) => h - 10 - r * (h - 20);
  const line = points.map((p) => `${x(p.tick).toFixed(1)},${y(p.actionRisk).toFixed(1)}`).join(" ");
  const dots = points
    .map(
      (p) =>
        `<circle cx="${x(p.tick).toFixed(1)}" cy="${y(p.actionRisk).toFixed(1)}" r="3"
           class="dot ${p.verdict.toLowerCase()}"><title>${esc(p.stepId)}: ${fmtProb(
             p.actionRisk,
           )}</title></circle>`,
    )
    .join("");
  const systemic = state.systemic.length
    ? `<div class="systemic">systemic HEP: ${fmtProb(
        state.systemic[state.systemic.length - 1].value,
      )}</div>`
    : "";
  return `<svg viewBox="0 0 ${w} ${h}" class="trajectory" preserveAspectRatio="none">
    <polyline points="${line}" fill="none" class="risk-line"/>${dots}</svg>${systemic}`;
}

export function renderMap(state: ConsoleState): string {
  const current =
    state.steps[state.cursor] ??
    state.steps.find((s) => s.lifecycle !== "Executed") ??
    state.steps[state.steps.length - 1];
  if (!current?.path?.nodes?.length) {
    return `<div class="empty">no compiled path to plot</div>`;
  }
  const nodes = current.path.nodes;
  const line = nodes.map((n) => `${n.x},${n.y}`).join(" ");
  const markers = nodes
    .map(
      (n, i) => `<g class="marker">
        <circle cx="${n.x}" cy="${n.y}" r="14"/>
        <text x="${n.x}" y="${n.y + 5}">${i + 1}</text>
        <title>${esc(n.element_id)} (${n.x}, ${n.y}) ${esc(n.action)}</title>
      </g>`,
    )
    .join("");
  return `<div class="map-title">step ${esc(current.id)} — ${nodes.length} interface nodes</div>
  <svg viewBox="0 0 ${SCREEN_W} ${SCREEN_H}" class="screen-map">
    <rect x="0" y="0" width="${SCREEN_W}" height="${SCREEN_H}" class="screen"/>
    <polyline points="${line}" fill="none" class="path-line"/>
    ${markers}
  </svg>`;
}

export function renderAudit(state: ConsoleState): string {
  const rows = state.auditRows
    .slice(-30)
    .reverse()
    .map(
      (r) => `<tr class="${r.actor}">
        <td>${r.seq}</td><td>${r.tick}</td><td>${esc(r.kind)}</td>
        <td>${esc(r.step_id ?? "")}</td><td>${esc(r.verdict ?? "")}</td>
        <td>${esc(r.actor)}${r.operator_action !== "none" ? "/" + esc(r.operator_action) : ""}</td>
      </tr>`,
    )
    .join("");
  const notices = state.notices
    .slice(-5)
    .map((n) => `<div class="notice">${esc(n)}</div>`)
    .join("");
  return `${notices}<table class="audit">
    <thead><tr><th>seq</th><th>tick</th><th>kind</th><th>step</th><th>verdict</th><th>actor</th></tr></thead>
    <tbody>${rows}</tbody></table>`;
}
