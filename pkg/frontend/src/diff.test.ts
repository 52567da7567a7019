import { describe, expect, it } from "vitest";

import { diffGraph, nodeLabel } from "./diff.js";
import type { GraphEdge, GraphNode, GraphPayload } from "./types.js";

const node = (id: string, importance = 0.5): GraphNode => ({
  id,
  label: `label ${id}`,
  ctype: "fact",
  importance,
  protected: false,
  access_count: 0,
});

const edge = (src: string, dst: string, predicate = "related_to"): GraphEdge => ({
  src,
  dst,
  predicate,
  strength: 0.5,
});

const graph = (nodes: GraphNode[], edges: GraphEdge[]): GraphPayload => ({ nodes, edges });

describe("diffGraph", () => {
  it("reports removed nodes and added edges", () => {
    const before = graph([node("a"), node("b"), node("c")], [edge("a", "b")]);
    const after = graph([node("a"), node("b")], [edge("a", "b"), edge("b", "a")]);
    const d = diffGraph(before, after);
    expect(d.removedNodes.map((n) => n.id)).toEqual(["c"]);
    expect(d.addedNodes).toEqual([]);
    expect(d.addedEdges).toEqual([edge("b", "a")]);
    expect(d.removedEdges).toEqual([]);
  });

  it("treats predicate as part of edge identity", () => {
    const before = graph([node("a"), node("b")], [edge("a", "b", "related_to")]);
    const after = graph([node("a"), node("b")], [edge("a", "b", "contradicts")]);
    const d = diffGraph(before, after);
    expect(d.addedEdges).toHaveLength(1);
    expect(d.removedEdges).toHaveLength(1);
  });

  it("is empty for identical payloads", () => {
    const g = graph([node("a")], []);
    const d = diffGraph(g, g);
    expect(d.addedNodes).toEqual([]);
    expect(d.removedNodes).toEqual([]);
    expect(d.addedEdges).toEqual([]);
    expect(d.removedEdges).toEqual([]);
  });
});

describe("nodeLabel", () => {
  it("resolves labels and falls back to the id", () => {
    const g = graph([node("a")], []);
    expect(nodeLabel(g, "a")).toBe("label a");
    expect(nodeLabel(g, "ghost")).toBe("ghost");
  });
});
