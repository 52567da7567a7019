// HTML/SVG string builders. Every displayed number is rendered from a
// service response field and carries the raw value in a data-raw
// attribute so displays can be audited against the wire payload.

import type {
  GraphDiff,
} from "./diff.js";
import type {
  GraphPayload,
  QueryHit,
  SleepReport,
  Stats,
  TaggedConcept,
} from "./types.js";

export function esc(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

// Trim long floats for display; the exact wire value rides along in
// data-raw and is what tests compare against.
export function num(value: number, places = 3): string {
  const shown = Number.isInteger(value) ? String(value) : value.toFixed(places);
  return `<span class="num" data-raw="${String(value)}">${shown}</span>`;
}

export function conceptChip(t: TaggedConcept): string {
  const dims = t.value;
  return (
    `<span class="chip" data-id="${esc(t.concept_id)}">` +
    `<b>${esc(t.label)}</b> <i>(${esc(t.ctype)})</i> ` +
    `imp ${num(t.importance)}` +
    `<span class="dims">nov ${num(dims.novelty)} · emo ${num(dims.emotional)} · ` +
    `task ${num(dims.task)} · rep ${num(dims.repetition)}</span>` +
    `</span>`
  );
}

export function hitRow(h: QueryHit): string {
  return (
    `<li class="hit" data-id="${esc(h.concept_id)}">` +
    `<b>${esc(h.label)}</b> <i>(${esc(h.ctype)})</i> ` +
    `fused ${num(h.fused_score)} = sem ${num(h.semantic)} ` +
    `+ imp ${num(h.importance)} + prox ${num(h.graph_proximity)}` +
    `</li>`
  );
}

export function sleepReportPanel(r: SleepReport, labelOf: (id: string) => string): string {
  const paths = r.dream_paths
    .map((p) => `<li class="dream-path">${p.map((id) => esc(labelOf(id))).join(" &rarr; ")}</li>`)
    .join("");
  const forgotten = r.forgotten_ids
    .map((id) => `<li class="forgotten">${esc(labelOf(id))}</li>`)
    .join("");
  return (
    `<div class="sleep-report">` +
    `<div>trigger: <b>${esc(r.trigger.reason)}</b> ` +
    `(measured ${num(r.trigger.measured)} vs ${num(r.trigger.threshold)})</div>` +
    `<div>episodes transferred: ${num(r.episodes_transferred)} · ` +
    `pairs strengthened: ${num(r.pairs_strengthened)} · ` +
    `edges downscaled: ${num(r.edges_downscaled)}</div>` +
    `<div>dreams: ${num(r.dreams_integrated)} of ${num(r.dreams_attempted)} integrated</div>` +
    `<div>theta_f: ${num(r.theta_f, 4)} · forgotten: ${num(r.concepts_forgotten)}</div>` +
    `<ul class="dream-paths">${paths}</ul>` +
    `<ul class="forgotten-list">${forgotten}</ul>` +
    `</div>`
  );
}

export function statsBar(s: Stats): string {
  return (
    `<span>concepts ${num(s.concepts)}</span>` +
    `<span>edges ${num(s.edges)}</span>` +
    `<span>wm ${num(s.wm_size)}</span>` +
    `<span>entropy ${num(s.entropy)}</span>` +
    `<span>conflict ${num(s.conflict_density)}</span>` +
    `<span>msgs ${num(s.messages_processed)}</span>` +
    `<span>sleeps ${num(s.sleep_cycles_completed)}</span>` +
    `<span>dreams ${num(s.dreams_generated)}</span>`
  );
}

export interface GraphHighlights {
  addedEdges?: Set<string>;
  removedNodeIds?: Set<string>;
}

const edgeKey = (src: string, dst: string, predicate: string): string =>
  `${src}${dst}${predicate}`;

// Deterministic circle layout; node radius scales with the served
// importance (presentation geometry, not a displayed metric).
export function graphSvg(g: GraphPayload, highlights: GraphHighlights = {}, size = 520): string {
  const n = g.nodes.length;
  if (n === 0) return `<svg class="graph" viewBox="0 0 ${size} ${size}"></svg>`;
  const cx = size / 2;
  const cy = size / 2;
  const orbit = size * 0.4;
  const pos = new Map<string, { x: number; y: number }>();
  g.nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    pos.set(node.id, {
      x: cx + orbit * Math.cos(angle),
      y: cy + orbit * Math.sin(angle),
    });
  });
  const added = highlights.addedEdges ?? new Set<string>();
  const edges = g.edges
    .map((e) => {
      const a = pos.get(e.src);
      const b = pos.get(e.dst);
      if (!a || !b) return "";
      const classes = ["edge", `edge-${e.predicate}`];
      if (e.predicate === "contradicts") classes.push("edge-conflict");
      if (added.has(edgeKey(e.src, e.dst, e.predicate))) classes.push("edge-new");
      const width = Math.min(0.5 + e.strength * 2, 5);
      return (
        `<line class="${classes.join(" ")}" x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}"` +
        ` x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" stroke-width="${width.toFixed(2)}"` +
        ` data-strength="${String(e.strength)}"><title>${esc(e.predicate)}</title></line>`
      );
    })
    .join("");
  const nodes = g.nodes
    .map((node) => {
      const p = pos.get(node.id)!;
      const r = 5 + node.importance * 14;
      const classes = ["node", `node-${node.ctype}`];
      if (node.protected) classes.push("node-protected");
      if (highlights.removedNodeIds?.has(node.id)) classes.push("node-removed");
      return (
        `<g class="${classes.join(" ")}" data-id="${esc(node.id)}" data-importance="${String(node.importance)}">` +
        `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="${r.toFixed(1)}">` +
        `<title>${esc(node.label)} (${esc(node.ctype)})</title></circle>` +
        `<text x="${p.x.toFixed(1)}" y="${(p.y - r - 3).toFixed(1)}">${esc(node.label)}</text>` +
        `</g>`
      );
    })
    .join("");
  return `<svg class="graph" viewBox="0 0 ${size} ${size}">${edges}${nodes}</svg>`;
}

export function diffPanel(diff: GraphDiff, report: SleepReport | null): string {
  const removed = diff.removedNodes.map((n) => `<li>${esc(n.label)}</li>`).join("");
  const addedEdges = diff.addedEdges
    .map((e) => `<li>${esc(e.src)} &rarr; ${esc(e.dst)} <i>(${esc(e.predicate)})</i></li>`)
    .join("");
  const reportBits = report
    ? `<div>report says forgotten: ${num(report.concepts_forgotten)}, ` +
      `dreams integrated: ${num(report.dreams_integrated)}</div>`
    : "";
  return (
    `<div class="diff-panel">` +
    reportBits +
    `<h4>pruned concepts (${diff.removedNodes.length})</h4><ul class="diff-removed">${removed}</ul>` +
    `<h4>new edges (${diff.addedEdges.length})</h4><ul class="diff-added">${addedEdges}</ul>` +
    `</div>`
  );
}

export function errorBanner(message: string): string {
  return `<div class="banner error">${esc(message)} <button class="retry">retry</button></div>`;
}
