// Pure structural diff between two graph snapshots. Set membership only;
// every count shown in the UI comes from these arrays or from service
// report fields, never from arithmetic here.

import type { GraphEdge, GraphNode, GraphPayload } from "./types.js";

export interface GraphDiff {
  addedNodes: GraphNode[];
  removedNodes: GraphNode[];
  addedEdges: GraphEdge[];
  removedEdges: GraphEdge[];
}

const edgeKey = (e: GraphEdge): string => `${e.src}${e.dst}${e.predicate}`;

export function diffGraph(before: GraphPayload, after: GraphPayload): GraphDiff {
  const beforeNodes = new Map(before.nodes.map((n) => [n.id, n]));
  const afterNodes = new Map(after.nodes.map((n) => [n.id, n]));
  const beforeEdges = new Map(before.edges.map((e) => [edgeKey(e), e]));
  const afterEdges = new Map(after.edges.map((e) => [edgeKey(e), e]));

  return {
    addedNodes: after.nodes.filter((n) => !beforeNodes.has(n.id)),
    removedNodes: before.nodes.filter((n) => !afterNodes.has(n.id)),
    addedEdges: after.edges.filter((e) => !beforeEdges.has(edgeKey(e))),
    removedEdges: before.edges.filter((e) => !afterEdges.has(edgeKey(e))),
  };
}

export function nodeLabel(payload: GraphPayload, id: string): string {
  const node = payload.nodes.find((n) => n.id === id);
  return node ? node.label : id;
}
