// A scripted stand-in for the session service. It serves canned state
// snapshots and enforces the same protocol rules (stale digests conflict,
// undo pops history); no mathematics happens here, mirroring the real
// division of labor where the Python engine owns all facts.

import { MoveInfo, SessionState } from "../src/api.js";

export interface Scripted {
  state: SessionState;
  moves: MoveInfo[];
}

export function mkState(
  digest: string,
  won: boolean,
  history: number,
  mSizes: number[] = [12, 9],
): SessionState {
  return {
    session_id: "s1",
    status: won ? "won" : "open",
    won,
    digest,
    history_length: history,
    conditions: [
      { index: 0, name: "g^p" },
      { index: 1, name: "g^lu" },
      { index: 2, name: "g^ru" },
      { index: 3, name: "g^ass" },
    ],
    x: { o: ["o:0"], m: Array.from({ length: mSizes[0] ?? 0 }, (_, i) => `m:${i}`) },
    y: { o: ["o:0"], m: Array.from({ length: mSizes[1] ?? 0 }, (_, i) => `m:${i}`) },
    m: { o: [0], m: Array.from({ length: mSizes[0] ?? 0 }, (_, i) => i % (mSizes[1] || 1)) },
  };
}

export function mkMove(digest: string, kind = "DomE", condition = 1): MoveInfo {
  return {
    digest,
    kind,
    condition,
    condition_name: "g^lu",
    witnesses: { f: { m: [0, 1] }, h: { m: [0, 0] } },
  };
}

export class FakeServer {
  steps: Scripted[];
  cursor = 0;
  traceDoc = { format_version: "1.0.0", kind: "trace", payload: { steps: [] } };
  log: string[] = [];

  constructor(steps: Scripted[]) {
    this.steps = steps;
  }

  private current(): Scripted {
    const s = this.steps[this.cursor];
    if (!s) throw new Error("script exhausted");
    return s;
  }

  fetch = async (url: string | URL | Request, init?: RequestInit): Promise<Response> => {
    const u = String(url);
    this.log.push(`${init?.method ?? "GET"} ${u}`);
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      });
    const path = u.replace(/^https?:\/\/[^/]+/, "");
    if (path === "/sessions" && init?.method === "POST") {
      return json(this.current().state);
    }
    const moveApply = path.match(/^\/sessions\/([^/]+)\/moves\/([^/?]+)$/);
    if (moveApply && init?.method === "POST") {
      const digest = moveApply[2];
      const legal = this.current().moves.find((m) => m.digest === digest);
      if (!legal) {
        return json({ detail: "stale move" }, 409);
      }
      this.cursor += 1;
      return json(this.current().state);
    }
    if (path.match(/^\/sessions\/[^/]+\/undo$/) && init?.method === "POST") {
      if (this.cursor === 0) {
        return json({ detail: "nothing to undo" }, 409);
      }
      this.cursor -= 1;
      return json(this.current().state);
    }
    if (path.match(/^\/sessions\/[^/]+\/trace$/)) {
      return json(this.traceDoc);
    }
    const movesMatch = path.match(/^\/sessions\/[^/]+\/moves\?(.*)$/);
    if (movesMatch) {
      const params = new URLSearchParams(movesMatch[1]);
      let moves = this.current().moves;
      const kind = params.get("kind");
      if (kind) moves = moves.filter((m) => m.kind === kind);
      const condition = params.get("condition");
      if (condition !== null) moves = moves.filter((m) => m.condition === Number(condition));
      const page = Number(params.get("page") ?? 0);
      const pageSize = Number(params.get("page_size") ?? 50);
      return json({
        session_id: "s1",
        digest: this.current().state.digest,
        page,
        page_size: pageSize,
        total: moves.length,
        truncated: false,
        moves: moves.slice(page * pageSize, (page + 1) * pageSize),
      });
    }
    if (path.match(/^\/sessions\/[^/]+$/)) {
      return json(this.current().state);
    }
    return json({ detail: "not found" }, 404);
  };
}

export function threeMoveScript(): FakeServer {
  return new FakeServer([
    { state: mkState("d0", false, 0), moves: [mkMove("mv1"), mkMove("mv2"), mkMove("mv3")] },
    { state: mkState("d1", false, 1), moves: [mkMove("mv2"), mkMove("mv3")] },
    { state: mkState("d2", false, 2), moves: [mkMove("mv3")] },
    { state: mkState("d3", true, 3, [9, 9]), moves: [] },
  ]);
}
