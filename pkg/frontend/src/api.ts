// Typed client for the engine API. Mutating calls are serialized on the
// client side: at most one is in flight, reads may overlap.

import type {
  ApiErrorBody,
  GraphPayload,
  IngestReport,
  QueryResponse,
  SelfResponse,
  SleepResponse,
  Stats,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody | null,
  ) {
    super(body ? `${body.error}: ${body.detail}` : `HTTP ${status}`);
  }

  get busy(): boolean {
    return this.status === 409;
  }
}

export class MutationInFlightError extends Error {
  constructor() {
    super("another mutating request is still in flight");
  }
}

async function parseError(res: Response): Promise<ApiError> {
  let body: ApiErrorBody | null = null;
  try {
    body = (await res.json()) as ApiErrorBody;
  } catch {
    body = null;
  }
  return new ApiError(res.status, body);
}

export class ScmClient {
  private mutationPending = false;

  constructor(public baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async get<T>(path: string): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    if (this.mutationPending) throw new MutationInFlightError();
    this.mutationPending = true;
    try {
      const res = await fetch(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
      if (!res.ok) throw await parseError(res);
      return (await res.json()) as T;
    } finally {
      this.mutationPending = false;
    }
  }

  health(): Promise<{ status: string }> {
    return this.get("/v1/health");
  }

  sendMessage(text: string): Promise<IngestReport> {
    return this.post("/v1/messages", { text });
  }

  query(q: string, k = 3): Promise<QueryResponse> {
    const params = new URLSearchParams({ q, k: String(k) });
    return this.get(`/v1/query?${params}`);
  }

  sleep(force = true): Promise<SleepResponse> {
    return this.post("/v1/sleep", { force });
  }

  self(q = "summary"): Promise<SelfResponse> {
    const params = new URLSearchParams({ q });
    return this.get(`/v1/self?${params}`);
  }

  stats(): Promise<Stats> {
    return this.get("/v1/stats");
  }

  graph(limit = 200): Promise<GraphPayload> {
    return this.get(`/v1/graph?limit=${limit}`);
  }

  saveSnapshot(path?: string): Promise<{ path: string; bytes: number }> {
    return this.post("/v1/snapshot/save", path ? { path } : {});
  }

  loadSnapshot(path?: string): Promise<{ path: string; stats: Stats }> {
    return this.post("/v1/snapshot/load", path ? { path } : {});
  }

  advanceClock(hours: number): Promise<{ now: string }> {
    return this.post("/v1/clock/advance", { hours });
  }
}
