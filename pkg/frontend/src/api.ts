// Typed client for the session API. The UI never computes mathematical
// facts itself: everything rendered comes from these responses.

export interface ConditionInfo {
  index: number;
  name: string;
}

export interface SessionState {
  session_id: string;
  status: "open" | "won";
  won: boolean;
  digest: string;
  history_length: number;
  conditions: ConditionInfo[];
  x: Record<string, string[]>;
  y: Record<string, string[]>;
  m: Record<string, number[]>;
}

export interface MoveInfo {
  digest: string;
  kind: string;
  condition: number;
  condition_name: string;
  witnesses: Record<string, Record<string, number[]>>;
}

export interface MovePage {
  session_id: string;
  digest: string;
  page: number;
  page_size: number;
  total: number;
  truncated: boolean;
  moves: MoveInfo[];
}

export interface MoveQuery {
  kind?: string;
  condition?: number;
  productive?: boolean;
  page?: number;
  pageSize?: number;
}

export class StaleMoveError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "StaleMoveError";
  }
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

export interface RetryOptions {
  attempts: number;
  baseDelayMs: number;
}

const DEFAULT_RETRY: RetryOptions = { attempts: 3, baseDelayMs: 200 };

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class SessionApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
    private readonly retry: RetryOptions = DEFAULT_RETRY,
  ) {}

  // Network failures are retried with exponential backoff; HTTP errors are
  // not retried (a 409 means the move went stale, retrying cannot help).
  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let lastError: unknown;
    for (let attempt = 0; attempt < this.retry.attempts; attempt++) {
      if (attempt > 0) {
        await sleep(this.retry.baseDelayMs * 2 ** (attempt - 1));
      }
      let response: Response;
      try {
        response = await this.fetchImpl(this.baseUrl + path, init);
      } catch (err) {
        lastError = err;
        continue;
      }
      if (response.ok) {
        return response.json();
      }
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // keep the status text
      }
      if (response.status === 409) {
        throw new StaleMoveError(detail);
      }
      throw new ApiError(response.status, detail);
    }
    throw new ApiError(0, `network failure after ${this.retry.attempts} attempts: ${lastError}`);
  }

  async createSession(model: unknown, config: unknown): Promise<SessionState> {
    return (await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ model, config }),
    })) as SessionState;
  }

  async getState(sessionId: string): Promise<SessionState> {
    return (await this.request(`/sessions/${sessionId}`)) as SessionState;
  }

  async listMoves(sessionId: string, query: MoveQuery = {}): Promise<MovePage> {
    const params = new URLSearchParams();
    if (query.kind) params.set("kind", query.kind);
    if (query.condition !== undefined) params.set("condition", String(query.condition));
    if (query.productive) params.set("productive", "true");
    params.set("page", String(query.page ?? 0));
    params.set("page_size", String(query.pageSize ?? 50));
    return (await this.request(
      `/sessions/${sessionId}/moves?${params.toString()}`,
    )) as MovePage;
  }

  async applyMove(sessionId: string, moveDigest: string): Promise<SessionState> {
    return (await this.request(`/sessions/${sessionId}/moves/${moveDigest}`, {
      method: "POST",
    })) as SessionState;
  }

  async undo(sessionId: string): Promise<SessionState> {
    return (await this.request(`/sessions/${sessionId}/undo`, {
      method: "POST",
    })) as SessionState;
  }

  async exportTrace(sessionId: string): Promise<unknown> {
    return this.request(`/sessions/${sessionId}/trace`);
  }
}
