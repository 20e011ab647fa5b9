// View-model store. State changes only after the server confirms an action
// (optimistic updates are deliberately impossible: every mutation method
// awaits the response and then replaces the snapshot wholesale).

import {
  MoveInfo,
  MovePage,
  MoveQuery,
  SessionApi,
  SessionState,
  StaleMoveError,
} from "./api.js";

export interface AppliedMove {
  digest: string;
  kind: string;
  conditionName: string;
}

export interface ViewState {
  phase: "idle" | "loading" | "ready" | "error";
  error: string | null;
  notice: string | null;
  session: SessionState | null;
  moves: MovePage | null;
  query: MoveQuery;
  applied: AppliedMove[];
  busy: boolean;
}

export type Listener = (state: ViewState) => void;

export class GameStore {
  private state: ViewState = {
    phase: "idle",
    error: null,
    notice: null,
    session: null,
    moves: null,
    query: { page: 0, pageSize: 25 },
    applied: [],
    busy: false,
  };
  private listeners: Listener[] = [];

  constructor(private readonly api: SessionApi) {}

  getState(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const l of this.listeners) l(this.state);
  }

  async loadSession(sessionId: string): Promise<void> {
    this.set({ phase: "loading", error: null });
    try {
      const session = await this.api.getState(sessionId);
      this.set({ phase: "ready", session, applied: [] });
      await this.refreshMoves();
    } catch (err) {
      this.set({ phase: "error", error: String(err) });
    }
  }

  async createSession(model: unknown, config: unknown): Promise<void> {
    this.set({ phase: "loading", error: null });
    try {
      const session = await this.api.createSession(model, config);
      this.set({ phase: "ready", session, applied: [] });
      await this.refreshMoves();
    } catch (err) {
      this.set({ phase: "error", error: String(err) });
    }
  }

  async setQuery(query: Partial<MoveQuery>): Promise<void> {
    const merged = { ...this.state.query, ...query };
    if (query.kind !== undefined || query.condition !== undefined ||
        query.productive !== undefined) {
      merged.page = 0;
    }
    this.set({ query: merged });
    await this.refreshMoves();
  }

  async refreshMoves(): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    try {
      const moves = await this.api.listMoves(session.session_id, this.state.query);
      this.set({ moves, notice: null });
    } catch (err) {
      this.set({ error: String(err) });
    }
  }

  async applyMove(move: MoveInfo): Promise<void> {
    const session = this.state.session;
    if (!session || this.state.busy) return;
    this.set({ busy: true, error: null });
    try {
      const next = await this.api.applyMove(session.session_id, move.digest);
      this.set({
        session: next,
        applied: [
          ...this.state.applied,
          { digest: move.digest, kind: move.kind, conditionName: move.condition_name },
        ],
      });
      await this.refreshMoves();
    } catch (err) {
      if (err instanceof StaleMoveError) {
        // the configuration changed under us: refresh and let the user retry
        this.set({ notice: "move went stale; the move list was refreshed" });
        await this.refreshState();
        await this.refreshMoves();
      } else {
        this.set({ error: String(err) });
      }
    } finally {
      this.set({ busy: false });
    }
  }

  async undo(): Promise<void> {
    const session = this.state.session;
    if (!session || this.state.busy) return;
    this.set({ busy: true, error: null });
    try {
      const next = await this.api.undo(session.session_id);
      this.set({ session: next, applied: this.state.applied.slice(0, -1) });
      await this.refreshMoves();
    } catch (err) {
      this.set({ error: String(err) });
    } finally {
      this.set({ busy: false });
    }
  }

  async refreshState(): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    try {
      const fresh = await this.api.getState(session.session_id);
      this.set({ session: fresh });
    } catch (err) {
      this.set({ error: String(err) });
    }
  }

  async exportTrace(): Promise<unknown> {
    const session = this.state.session;
    if (!session) throw new Error("no session loaded");
    return this.api.exportTrace(session.session_id);
  }
}
