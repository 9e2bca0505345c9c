// REST client for the rehearsal service. The bearer token lives in memory
// only (a login field fills it); nothing is written to storage.

import type {
  AnswerResponse,
  ContinuationChoice,
  CreateSessionRequest,
  DocumentResponse,
  GradeResponse,
  HintResponse,
  SessionView,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly details?: Record<string, unknown>,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ExamSimClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: {
        "Content-Type": "application/json",
        Authorization: `Bearer ${this.token}`,
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "http_error";
      let message = `HTTP ${response.status}`;
      let details: Record<string, unknown> | undefined;
      try {
        const payload = (await response.json()) as {
          error?: { code?: string; message?: string; details?: Record<string, unknown> };
        };
        code = payload.error?.code ?? code;
        message = payload.error?.message ?? message;
        details = payload.error?.details;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(response.status, code, message, details);
    }
    return (await response.json()) as T;
  }

  createSession(body: CreateSessionRequest): Promise<SessionView> {
    return this.request("POST", "/api/sessions", body);
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/api/sessions/${encodeURIComponent(id)}`);
  }

  submitAnswer(id: string, text: string): Promise<AnswerResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(id)}/answer`, { text });
  }

  requestHint(id: string): Promise<HintResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(id)}/hint`);
  }

  requestGrade(id: string): Promise<GradeResponse> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(id)}/grade`);
  }

  continueSession(id: string, choice: ContinuationChoice, topic?: string): Promise<SessionView> {
    return this.request("POST", `/api/sessions/${encodeURIComponent(id)}/continue`, {
      choice,
      topic,
    });
  }

  uploadDocument(title: string, text: string, format = "plain"): Promise<DocumentResponse> {
    return this.request("POST", "/api/documents", { title, text, format });
  }
}
