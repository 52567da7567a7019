// Console wiring: chat pane, sleep controls, graph inspector. The page is
// a pure view over the HTTP API; all state lives server-side except the
// last-fetched graph used for before/after diffs.

import { ApiError, MutationInFlightError, ScmClient } from "./api.js";
import { diffGraph, nodeLabel } from "./diff.js";
import {
  conceptChip,
  diffPanel,
  errorBanner,
  graphSvg,
  hitRow,
  sleepReportPanel,
  statsBar,
} from "./render.js";
import type { GraphPayload, SleepReport } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const QUESTION = /^(what|where|who|when|which|how|do i|did i|am i|tell me)\b|\?\s*$/i;

let client = new ScmClient(localStorage.getItem("scm-url") ?? "http://localhost:8750");
let lastGraph: GraphPayload | null = null;
let lastReport: SleepReport | null = null;

function setBanner(message: string | null, retry?: () => void): void {
  const host = $("banner-host");
  if (!message) {
    host.innerHTML = "";
    return;
  }
  host.innerHTML = errorBanner(message);
  const button = host.querySelector<HTMLButtonElement>(".retry");
  if (button && retry) button.addEventListener("click", retry);
}

function appendLog(html: string, cls = "entry"): void {
  const log = $("chat-log");
  const div = document.createElement("div");
  div.className = cls;
  div.innerHTML = html;
  log.appendChild(div);
  log.scrollTop = log.scrollHeight;
}

async function refreshStats(): Promise<void> {
  try {
    const stats = await client.stats();
    $("stats-bar").innerHTML = statsBar(stats);
  } catch {
    // stats are decorative; the next action surfaces real errors
  }
}

async function refreshGraph(highlightsFrom?: GraphPayload): Promise<void> {
  const fresh = await client.graph(200);
  let highlights = {};
  if (highlightsFrom) {
    const diff = diffGraph(highlightsFrom, fresh);
    highlights = {
      addedEdges: new Set(
        diff.addedEdges.map((e) => `${e.src}${e.dst}${e.predicate}`),
      ),
    };
    $("diff-host").innerHTML = diffPanel(diff, lastReport);
  }
  $("graph-host").innerHTML = graphSvg(fresh, highlights);
  lastGraph = fresh;
}

async function submitUtterance(): Promise<void> {
  const input = $<HTMLInputElement>("chat-input");
  const text = input.value.trim();
  if (!text) return;
  setBanner(null);
  try {
    if (QUESTION.test(text)) {
      const res = await client.query(text, 3);
      appendLog(
        `<div class="you">? ${text}</div><ul>${res.hits.map(hitRow).join("")}</ul>`,
        "entry ask",
      );
    } else {
      const report = await client.sendMessage(text);
      const chips = report.tagged.map(conceptChip).join(" ");
      let extra = "";
      if (report.sleep_report) {
        lastReport = report.sleep_report;
        extra = `<div class="slept">slept mid-turn</div>` + renderReport(report.sleep_report);
      }
      appendLog(`<div class="you">&gt; ${text}</div><div>${chips}</div>${extra}`, "entry say");
    }
    input.value = "";
    await refreshStats();
  } catch (err) {
    handleError(err, submitUtterance);
  }
}

function renderReport(report: SleepReport): string {
  const labels = lastGraph ?? { nodes: [], edges: [] };
  return sleepReportPanel(report, (id) => nodeLabel(labels, id));
}

async function forceSleep(): Promise<void> {
  const button = $<HTMLButtonElement>("sleep-button");
  button.disabled = true;
  setBanner(null);
  try {
    const before = await client.graph(200);
    const res = await client.sleep(true);
    lastReport = res.report;
    $("sleep-host").innerHTML = res.report ? renderReport(res.report) : "no cycle ran";
    await refreshGraph(before);
    await refreshStats();
  } catch (err) {
    handleError(err, forceSleep);
  } finally {
    button.disabled = false;
  }
}

async function advanceClock(): Promise<void> {
  const hours = Number($<HTMLInputElement>("advance-hours").value || "0");
  setBanner(null);
  try {
    const res = await client.advanceClock(hours);
    $("clock-host").textContent = `clock now ${res.now}`;
    await refreshStats();
  } catch (err) {
    if (err instanceof ApiError && err.status === 400) {
      $("clock-host").textContent = "simulated clock disabled on this server";
      $<HTMLButtonElement>("advance-button").disabled = true;
      return;
    }
    handleError(err, advanceClock);
  }
}

function handleError(err: unknown, retry: () => void): void {
  if (err instanceof MutationInFlightError) {
    setBanner("still waiting on the previous request");
    return;
  }
  if (err instanceof ApiError && err.busy) {
    setBanner("engine is sleeping; try again in a moment", retry);
    return;
  }
  const message = err instanceof Error ? err.message : String(err);
  setBanner(`request failed: ${message}`, retry);
}

export function boot(): void {
  $<HTMLInputElement>("service-url").value = client.baseUrl;
  $("service-url").addEventListener("change", () => {
    client = new ScmClient($<HTMLInputElement>("service-url").value);
    localStorage.setItem("scm-url", client.baseUrl);
    void refreshStats();
    void refreshGraph();
  });
  $("chat-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void submitUtterance();
  });
  $("sleep-button").addEventListener("click", () => void forceSleep());
  $("advance-button").addEventListener("click", () => void advanceClock());
  $("graph-refresh").addEventListener("click", () => void refreshGraph());
  void refreshStats();
  void refreshGraph();
}

if (typeof document !== "undefined" && document.getElementById("chat-form")) {
  boot();
}
