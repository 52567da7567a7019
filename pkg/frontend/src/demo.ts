// Demo driver: three facts, a forced sleep, simulated aging, and a second
// sleep against a live service (started with SCM_SIMULATED_CLOCK=true).
// Prints the rendered numbers next to the raw wire values so the pure-view
// property can be audited by eye.

import { ScmClient } from "./api.js";
import { diffGraph } from "./diff.js";
import { conceptChip, diffPanel, sleepReportPanel } from "./render.js";

const RAW = /data-raw="([^"]+)"/g;

function rawNumbers(html: string): string[] {
  return [...html.matchAll(RAW)].map((m) => m[1]);
}

export async function runDemo(baseUrl: string): Promise<void> {
  const client = new ScmClient(baseUrl);
  await client.health();

  const facts = ["I live in Mumbai", "My name is Asha", "I like hiking"];
  for (const fact of facts) {
    const report = await client.sendMessage(fact);
    const chips = report.tagged.map(conceptChip).join(" ");
    const shown = rawNumbers(chips);
    const raw = report.tagged.flatMap((t) => [
      t.importance,
      t.value.novelty,
      t.value.emotional,
      t.value.task,
      t.value.repetition,
    ]);
    console.log(`ingested: ${fact}`);
    console.log(`  chips carry ${shown.length} numbers, raw payload has ${raw.length}`);
    if (shown.length !== raw.length || !raw.every((v, i) => String(v) === shown[i])) {
      throw new Error("rendered chip numbers do not match the wire payload");
    }
  }

  const before = await client.graph(200);
  const first = await client.sleep(true);
  if (!first.report) throw new Error("forced sleep returned no report");
  const panel = sleepReportPanel(first.report, (id) => id);
  const spot = [
    ["theta_f", String(first.report.theta_f)],
    ["concepts_forgotten", String(first.report.concepts_forgotten)],
    ["dreams_integrated", String(first.report.dreams_integrated)],
  ];
  for (const [name, raw] of spot) {
    if (!panel.includes(`data-raw="${raw}"`)) {
      throw new Error(`sleep panel does not carry raw ${name}=${raw}`);
    }
    console.log(`sleep panel spot-check ${name}=${raw} ok`);
  }

  await client.advanceClock(336);
  const second = await client.sleep(true);
  const after = await client.graph(200);
  const diff = diffGraph(before, after);
  console.log(
    `graph diff after both sleeps: +${diff.addedNodes.length} nodes, ` +
      `-${diff.removedNodes.length} nodes, +${diff.addedEdges.length} edges`,
  );
  console.log(diffPanel(diff, second.report).slice(0, 200) + "...");
  console.log("demo complete");
}

if (process.argv[1]?.endsWith("demo.js")) {
  const url = process.argv[2] ?? process.env.SCM_URL ?? "http://localhost:8750";
  runDemo(url).catch((err) => {
    console.error(err);
    process.exit(1);
  });
}
