import type { AnalyzeResponse, ModelResult } from "./types";
import { RELATION_LABELS, RELATION_COLORS, colorFor } from "./colors";

// Every renderer here is a pure function from data to an HTML string:
// no DOM access, no fetches, no computation of substitutes/relations/
// metrics. Displayed values come verbatim from the AnalyzeResponse;
// the only transformation is display formatting (number precision,
// HTML escaping) and presentation order of the gold list.

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtProb(p: number): string {
  return p.toFixed(3);
}

export function renderSentence(tokens: string[], targetIndex: number | null): string {
  const spans = tokens.map((tok, i) => {
    const cls = i === targetIndex ? "token target" : "token";
    return `<span class="${cls}" data-idx="${i}">${escapeHtml(tok)}</span>`;
  });
  return `<div class="sentence">${spans.join(" ")}</div>`;
}

export function renderGold(gold: Record<string, number>): string {
  const entries = Object.entries(gold).sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]));
  if (entries.length === 0) {
    return `<div class="gold"><span class="gold-label">gold:</span> <span class="dim">none</span></div>`;
  }
  const items = entries.map(
    ([word, weight]) => `<span class="gold-item">${escapeHtml(word)} [${weight}]</span>`,
  );
  return `<div class="gold"><span class="gold-label">gold:</span> ${items.join(" ")}</div>`;
}

export function renderLegend(): string {
  const items = RELATION_LABELS.map(
    (label) =>
      `<span class="legend-item"><span class="swatch" style="background:${RELATION_COLORS[label]}"></span>${label}</span>`,
  );
  return `<div class="legend">${items.join(" ")}</div>`;
}

export function renderModelRow(model: ModelResult): string {
  const chips = model.substitutes.map((s) => {
    const color = colorFor(s.relation);
    return (
      `<span class="subst" style="border-color:${color};background:${color}26" ` +
      `title="${escapeHtml(s.relation)}">${escapeHtml(s.word)} ` +
      `<span class="prob">${fmtProb(s.probability)}</span></span>`
    );
  });
  return (
    `<div class="model-row">` +
    `<div class="model-head"><span class="model-name">${escapeHtml(model.name)}</span>` +
    `<span class="model-injection">${escapeHtml(model.injection)}</span>` +
    `<span class="model-tp">TP ${model.true_positives}</span></div>` +
    `<div class="model-substs">${chips.join(" ")}</div>` +
    `</div>`
  );
}

export function renderGoldRankTable(response: AnalyzeResponse): string {
  const goldWords = Object.entries(response.gold)
    .sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]))
    .map(([word]) => word);
  if (goldWords.length === 0 || response.models.length === 0) {
    return "";
  }
  const header = response.models.map((m) => `<th>${escapeHtml(m.name)}</th>`).join("");
  const rows = goldWords.map((word) => {
    const cells = response.models
      .map((m) => {
        const rank = m.gold_ranks[word];
        return `<td>${rank === null || rank === undefined ? "&mdash;" : rank}</td>`;
      })
      .join("");
    return `<tr><td class="gold-word">${escapeHtml(word)}</td>${cells}</tr>`;
  });
  return (
    `<table class="rank-table"><thead><tr><th>gold ↓ / rank</th>${header}</tr></thead>` +
    `<tbody>${rows.join("")}</tbody></table>`
  );
}

export function renderEmptyState(): string {
  return (
    `<div class="empty-state">No models selected &mdash; ` +
    `pick at least one model to compare substitutes.</div>`
  );
}

export function renderErrorPanel(message: string): string {
  return `<div class="error-panel">API error: ${escapeHtml(message)}</div>`;
}

export function renderComparison(response: AnalyzeResponse): string {
  if (response.models.length === 0) {
    return renderEmptyState();
  }
  const parts = [
    renderSentence(response.tokens, response.target_index),
    renderGold(response.gold),
    renderLegend(),
    response.models.map(renderModelRow).join(""),
    renderGoldRankTable(response),
  ];
  return `<div class="comparison">${parts.join("")}</div>`;
}
