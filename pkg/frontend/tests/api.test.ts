import { describe, expect, it } from "vitest";

import { ApiError, SessionApi, StaleMoveError } from "../src/api.js";
import { threeMoveScript } from "./fake_server.js";

const jsonResponse = (body: unknown, status = 200) =>
  new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });

describe("SessionApi", () => {
  it("retries network failures with backoff and then succeeds", async () => {
    let calls = 0;
    const flaky = async () => {
      calls += 1;
      if (calls < 3) throw new TypeError("connection refused");
      return jsonResponse({ ok: true });
    };
    const api = new SessionApi("", flaky as typeof fetch, { attempts: 3, baseDelayMs: 1 });
    const state = await api.getState("s1");
    expect(calls).toBe(3);
    expect(state).toEqual({ ok: true });
  });

  it("gives up after the configured attempts", async () => {
    let calls = 0;
    const dead = async () => {
      calls += 1;
      throw new TypeError("still down");
    };
    const api = new SessionApi("", dead as typeof fetch, { attempts: 2, baseDelayMs: 1 });
    await expect(api.getState("s1")).rejects.toBeInstanceOf(ApiError);
    expect(calls).toBe(2);
  });

  it("maps 409 to StaleMoveError without retrying", async () => {
    let calls = 0;
    const conflict = async () => {
      calls += 1;
      return jsonResponse({ detail: "stale move" }, 409);
    };
    const api = new SessionApi("", conflict as typeof fetch, { attempts: 3, baseDelayMs: 1 });
    await expect(api.applyMove("s1", "deadbeef")).rejects.toBeInstanceOf(StaleMoveError);
    expect(calls).toBe(1);
  });

  it("maps other http errors to ApiError with the server detail", async () => {
    const missing = async () => jsonResponse({ detail: "unknown session" }, 404);
    const api = new SessionApi("", missing as typeof fetch, { attempts: 1, baseDelayMs: 1 });
    await expect(api.getState("nope")).rejects.toMatchObject({
      status: 404,
      message: "unknown session",
    });
  });

  it("builds move-list queries with filters and pagination", async () => {
    const server = threeMoveScript();
    const api = new SessionApi("", server.fetch as typeof fetch, { attempts: 1, baseDelayMs: 1 });
    const page = await api.listMoves("s1", {
      kind: "DomE",
      condition: 1,
      productive: true,
      page: 0,
      pageSize: 2,
    });
    expect(page.total).toBe(3);
    expect(page.moves).toHaveLength(2);
    const url = server.log.at(-1) ?? "";
    expect(url).toContain("kind=DomE");
    expect(url).toContain("condition=1");
    expect(url).toContain("productive=true");
    expect(url).toContain("page_size=2");
  });

  it("drives the full session protocol", async () => {
    const server = threeMoveScript();
    const api = new SessionApi("", server.fetch as typeof fetch, { attempts: 1, baseDelayMs: 1 });
    let state = await api.getState("s1");
    expect(state.won).toBe(false);
    for (const digest of ["mv1", "mv2", "mv3"]) {
      state = await api.applyMove("s1", digest);
    }
    expect(state.won).toBe(true);
    await expect(api.applyMove("s1", "mv1")).rejects.toBeInstanceOf(StaleMoveError);
    state = await api.undo("s1");
    expect(state.won).toBe(false);
    const trace = (await api.exportTrace("s1")) as { kind: string };
    expect(trace.kind).toBe("trace");
  });
});
