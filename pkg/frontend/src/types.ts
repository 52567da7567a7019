// Response shapes of the engine's HTTP API. The console renders these
// verbatim; it never derives numbers of its own.

export interface ValueDims {
  novelty: number;
  emotional: number;
  task: number;
  repetition: number;
}

export interface TaggedConcept {
  concept_id: string;
  label: string;
  ctype: string;
  value: ValueDims;
  importance: number;
}

export interface SleepTrigger {
  reason: string;
  measured: number;
  threshold: number;
}

export interface SleepReport {
  trigger: SleepTrigger;
  pairs_strengthened: number;
  edges_downscaled: number;
  episodes_transferred: number;
  dreams_attempted: number;
  dreams_integrated: number;
  dream_paths: string[][];
  theta_f: number;
  concepts_forgotten: number;
  forgotten_ids: string[];
  started_at: string | null;
  ended_at: string | null;
}

export interface IngestReport {
  concept_ids: string[];
  tagged: TaggedConcept[];
  new_relations: [string, string, string][];
  episode_id: string | null;
  evicted_episode_id: string | null;
  sleep_report: SleepReport | null;
  degraded: boolean;
}

export interface QueryHit {
  concept_id: string;
  fused_score: number;
  semantic: number;
  importance: number;
  graph_proximity: number;
  label: string;
  ctype: string;
}

export interface QueryResponse {
  hits: QueryHit[];
}

export interface SleepResponse {
  slept: boolean;
  report: SleepReport | null;
}

export interface SelfResponse {
  report: string;
  counters: {
    messages_processed: number;
    sleep_cycles_completed: number;
    dreams_generated: number;
  };
  capabilities: string[];
}

export interface Stats {
  concepts: number;
  edges: number;
  wm_size: number;
  entropy: number;
  conflict_density: number;
  last_sleep: string;
  messages_processed: number;
  sleep_cycles_completed: number;
  dreams_generated: number;
}

export interface GraphNode {
  id: string;
  label: string;
  ctype: string;
  importance: number;
  protected: boolean;
  access_count: number;
}

export interface GraphEdge {
  src: string;
  dst: string;
  predicate: string;
  strength: number;
}

export interface GraphPayload {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}
