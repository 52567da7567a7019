import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, MutationInFlightError, ScmClient } from "./api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ScmClient", () => {
  it("posts utterances to /v1/messages with a JSON body", async () => {
    const fetchMock = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
      expect(String(url)).toBe("http://x:1/v1/messages");
      expect(init?.method).toBe("POST");
      expect(JSON.parse(String(init?.body))).toEqual({ text: "I live in Mumbai" });
      return jsonResponse({ concept_ids: [], tagged: [], new_relations: [], episode_id: null, evicted_episode_id: null, sleep_report: null, degraded: false });
    });
    vi.stubGlobal("fetch", fetchMock);
    const client = new ScmClient("http://x:1/");
    const report = await client.sendMessage("I live in Mumbai");
    expect(report.degraded).toBe(false);
    expect(fetchMock).toHaveBeenCalledOnce();
  });

  it("encodes query parameters", async () => {
    const fetchMock = vi.fn(async (url: RequestInfo | URL) => {
      expect(String(url)).toBe("http://x:1/v1/query?q=where+do+i+live&k=5");
      return jsonResponse({ hits: [] });
    });
    vi.stubGlobal("fetch", fetchMock);
    await new ScmClient("http://x:1").query("where do i live", 5);
  });

  it("raises ApiError with the server payload", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse({ error: "BusyError", detail: "sleeping" }, 409)),
    );
    const client = new ScmClient("http://x:1");
    const err = await client.sleep(true).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.busy).toBe(true);
    expect(err.message).toContain("sleeping");
  });

  it("allows only one mutating request in flight", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => {
        await gate;
        return jsonResponse({ slept: true, report: null });
      }),
    );
    const client = new ScmClient("http://x:1");
    const first = client.sleep(true);
    await expect(client.sendMessage("hello there")).rejects.toBeInstanceOf(
      MutationInFlightError,
    );
    release();
    await first;
    // after completion the gate reopens
    const second = await client.sleep(true);
    expect(second.slept).toBe(true);
  });

  it("lets reads overlap with a pending mutation", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    vi.stubGlobal(
      "fetch",
      vi.fn(async (url: RequestInfo | URL) => {
        if (String(url).includes("/v1/sleep")) {
          await gate;
          return jsonResponse({ slept: true, report: null });
        }
        return jsonResponse({ concepts: 11, edges: 10 });
      }),
    );
    const client = new ScmClient("http://x:1");
    const pending = client.sleep(true);
    const stats = await client.stats();
    expect(stats.concepts).toBe(11);
    release();
    await pending;
  });

  it("trims trailing slashes from the base url", () => {
    expect(new ScmClient("http://x:1///").baseUrl).toBe("http://x:1");
  });
});
