import type {
  BotReplyJson,
  LexiconJson,
  OntologyJson,
  PosteriorJson,
  SelectionResponseJson,
} from "./types.js";

export const DEFAULT_BASE = "http://127.0.0.1:8000";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly base: string = DEFAULT_BASE,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(`${this.base}${path}`, init);
    const body = await res.json().catch(() => null);
    if (!res.ok) {
      const code = body && typeof body.error === "string" ? body.error : "http_error";
      const detail =
        body && typeof body.detail === "string"
          ? body.detail
          : `${res.status} ${res.statusText}`;
      throw new ApiError(res.status, code, detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
  }

  async createSession(): Promise<string> {
    const body = await this.post<{ session_id: string }>("/api/sessions");
    return body.session_id;
  }

  sendMessage(sessionId: string, text: string): Promise<BotReplyJson> {
    return this.post(`/api/sessions/${sessionId}/messages`, { text });
  }

  sendSelection(
    sessionId: string,
    word: string,
    entity: string,
  ): Promise<SelectionResponseJson> {
    return this.post(`/api/sessions/${sessionId}/selections`, { word, entity });
  }

  getPosterior(sessionId: string, word: string): Promise<PosteriorJson> {
    const query = new URLSearchParams({ word });
    return this.request(`/api/sessions/${sessionId}/posterior?${query}`);
  }

  getLexicon(): Promise<LexiconJson> {
    return this.request("/api/lexicon");
  }

  getOntology(): Promise<OntologyJson> {
    return this.request("/api/ontology");
  }
}
