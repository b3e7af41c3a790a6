import type {
  Feasibility,
  IndicesPayload,
  RorPayload,
  SmaaPayload,
} from "./types.js";
import { conflictToMaster, isStale, type Panel, type SessionState } from "./state.js";

/** Renderers return HTML strings so they stay testable without a DOM. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const fmtPct = (value: number) => `${(100 * value).toFixed(2)}%`;

export function renderBanner(state: SessionState): string {
  const panel = state.feasibility;
  if (!panel) return `<div class="banner pending" data-state="pending">checking…</div>`;
  const { data } = panel;
  if (data.compatible) {
    const eps = data.epsilon_star === null ? "?" : data.epsilon_star.toFixed(4);
    return (
      `<div class="banner compatible" data-state="compatible">` +
      `Compatible &mdash; &epsilon;* = ${eps}</div>`
    );
  }
  const chips = data.conflicts
    .map((conflict) => {
      const members = conflictToMaster(state, conflict);
      const parts = members
        .map(
          (idx) =>
            `<span class="conflict-member">${escapeHtml(state.labels[idx])}` +
            `<button data-action="retract" data-idx="${idx}">retract</button></span>`,
        )
        .join(" ");
      return `<span class="conflict">{ ${parts} }</span>`;
    })
    .join(" ");
  return (
    `<div class="banner incompatible" data-state="incompatible">` +
    `Incompatible &mdash; minimal conflicts: ${chips}</div>`
  );
}

export function renderStatementList(state: SessionState): string {
  const conflictMembers = new Set<number>();
  if (state.feasibility && !state.feasibility.data.compatible) {
    for (const conflict of state.feasibility.data.conflicts) {
      for (const idx of conflictToMaster(state, conflict)) conflictMembers.add(idx);
    }
  }
  const items = state.statements
    .map((_, idx) => {
      const checked = state.enabled[idx] ? " checked" : "";
      const flag = conflictMembers.has(idx) ? ` class="in-conflict"` : "";
      return (
        `<li${flag}><label><input type="checkbox" data-action="toggle" data-idx="${idx}"${checked}>` +
        ` ${escapeHtml(state.labels[idx])}</label></li>`
      );
    })
    .join("");
  const error = state.inlineError
    ? `<p class="inline-error">${escapeHtml(state.inlineError)}</p>`
    : "";
  return `<ol class="statements">${items}</ol>${error}`;
}

export function staleBadge<T>(state: SessionState, panel: Panel<T> | null): string {
  return isStale(state, panel)
    ? `<span class="stale-badge">stale &mdash; statements changed</span>`
    : "";
}

function heatColor(value: number): string {
  const alpha = Math.min(1, Math.max(0, value));
  return `rgba(178, 24, 43, ${alpha.toFixed(3)})`;
}

/** Rank-acceptability heatmap; each row carries its visual 100% total and
 * the per-row maximum cell is flagged. */
export function renderRaiHeatmap(smaa: SmaaPayload): string {
  const n = smaa.alternatives.length;
  const header =
    `<tr><th></th>` +
    Array.from({ length: n }, (_, s) => `<th>b${s + 1}</th>`).join("") +
    `<th>&Sigma;</th></tr>`;
  const rows = smaa.alternatives
    .map((alt, i) => {
      const row = smaa.rai[i];
      const maxValue = Math.max(...row);
      const cells = row
        .map((value, s) => {
          const isMax = value === maxValue && value > 0;
          const cls = isMax ? "cell row-max" : "cell";
          return (
            `<td class="${cls}" data-alt="${escapeHtml(alt)}" data-rank="${s + 1}"` +
            ` style="background-color:${heatColor(value)}" title="${fmtPct(value)}">` +
            `${(100 * value).toFixed(1)}</td>`
          );
        })
        .join("");
      const total = row.reduce((acc, value) => acc + value, 0);
      return `<tr><th>${escapeHtml(alt)}</th>${cells}<td class="row-total">${fmtPct(total)}</td></tr>`;
    })
    .join("");
  return `<table class="rai-heatmap">${header}${rows}</table>`;
}

/** Pairwise winning matrix; ties above 0.1% get a visible annotation. */
export function renderPwiMatrix(smaa: SmaaPayload): string {
  const header =
    `<tr><th></th>` +
    smaa.alternatives.map((alt) => `<th>${escapeHtml(alt)}</th>`).join("") +
    `</tr>`;
  const rows = smaa.alternatives
    .map((a, i) => {
      const cells = smaa.alternatives
        .map((c, j) => {
          if (i === j) return `<td class="diag">&middot;</td>`;
          const tie = smaa.ties[i][j];
          const marker =
            tie > 0.001
              ? `<span class="tie" title="ties: ${fmtPct(tie)}">&#8780;${(100 * tie).toFixed(1)}</span>`
              : "";
          return `<td data-a="${escapeHtml(a)}" data-c="${escapeHtml(c)}">${(100 * smaa.pwi[i][j]).toFixed(1)}${marker}</td>`;
        })
        .join("");
      return `<tr><th>${escapeHtml(a)}</th>${cells}</tr>`;
    })
    .join("");
  return `<table class="pwi-matrix">${header}${rows}</table>`;
}

export function renderExpectedRanking(smaa: SmaaPayload): string {
  const items = smaa.ranking
    .map((alt, pos) => {
      const summary = smaa.summary[alt];
      const modes = summary.top
        .map(([rank, share]) => `${rank} (${fmtPct(share)})`)
        .join(", ");
      return (
        `<li><strong>${escapeHtml(alt)}</strong> E = ${smaa.expected[alt].toFixed(3)}` +
        ` &mdash; best ${summary.best}, worst ${summary.worst}, modes ${modes}</li>`
      );
    })
    .join("");
  return `<ol class="expected-ranking">${items}</ol>`;
}

export function renderRorMatrices(ror: RorPayload): string {
  const matrix = (values: boolean[][], cls: string) => {
    const header =
      `<tr><th></th>` +
      ror.alternatives.map((alt) => `<th>${escapeHtml(alt)}</th>`).join("") +
      `</tr>`;
    const rows = ror.alternatives
      .map((a, i) => {
        const cells = values[i]
          .map((held) => `<td class="${held ? "holds" : "open"}">${held ? "&#10003;" : "&middot;"}</td>`)
          .join("");
        return `<tr><th>${escapeHtml(a)}</th>${cells}</tr>`;
      })
      .join("");
    return `<table class="${cls}">${header}${rows}</table>`;
  };
  return (
    `<div class="ror"><h3>necessary</h3>${matrix(ror.necessary, "nec-matrix")}` +
    `<h3>possible</h3>${matrix(ror.possible, "pos-matrix")}</div>`
  );
}

function bars(
  labels: string[],
  perLevel: Record<string, number[]>,
  comprehensive: Record<string, number>,
  signed: boolean,
): string {
  const groups = Object.entries(perLevel)
    .map(([key, values]) => {
      const rows = values
        .map((value, level) => {
          const width = Math.min(100, Math.abs(value) * 100);
          const cls = signed && value < 0 ? "bar negative" : "bar";
          return (
            `<div class="bar-row"><span class="bar-label">${escapeHtml(labels[level])}</span>` +
            `<span class="${cls}" style="width:${width.toFixed(1)}%" title="${value.toFixed(4)}"></span>` +
            `<span class="bar-value">${value.toFixed(3)}</span></div>`
          );
        })
        .join("");
      return (
        `<div class="bar-group"><h4>${escapeHtml(key)}` +
        ` <small>overall ${comprehensive[key].toFixed(3)}</small></h4>${rows}</div>`
      );
    })
    .join("");
  return `<div class="bars">${groups}</div>`;
}

export function renderIndexCharts(indices: IndicesPayload): string {
  return (
    `<div class="indices"><h3>criterion importance</h3>` +
    bars(indices.importance.labels, indices.importance.per_level, indices.importance.comprehensive, false) +
    `<h3>pairwise interaction</h3>` +
    bars(indices.interaction.labels, indices.interaction.per_level, indices.interaction.comprehensive, true) +
    `</div>`
  );
}

export function renderResultsPanels(state: SessionState): string {
  const sections: string[] = [];
  if (state.ror) {
    sections.push(
      `<section class="panel" data-panel="ror">${staleBadge(state, state.ror)}` +
        renderRorMatrices(state.ror.data) +
        `</section>`,
    );
  }
  if (state.smaa) {
    sections.push(
      `<section class="panel" data-panel="smaa">${staleBadge(state, state.smaa)}` +
        `<h3>rank acceptability</h3>` +
        renderRaiHeatmap(state.smaa.data) +
        `<h3>pairwise winning</h3>` +
        renderPwiMatrix(state.smaa.data) +
        `<h3>expected ranking</h3>` +
        renderExpectedRanking(state.smaa.data) +
        `</section>`,
    );
  }
  if (state.indices) {
    sections.push(
      `<section class="panel" data-panel="indices">${staleBadge(state, state.indices)}` +
        renderIndexCharts(state.indices.data) +
        `</section>`,
    );
  }
  if (state.jobRunning) {
    sections.push(`<section class="panel running">SMAA job running…</section>`);
  }
  return sections.join("\n");
}
