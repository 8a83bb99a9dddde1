import type {
  AnswerDoc,
  CreateSessionDoc,
  ErrorBody,
  RemindersDoc,
  SessionDoc,
} from "./types.js";

/** A non-2xx reply whose body carried the service's {code, detail, extras}. */
export class ApiError extends Error {
  constructor(
    readonly code: string,
    readonly status: number,
    readonly detail: string,
    readonly extras: Record<string, unknown> = {},
  ) {
    super(`${code}: ${detail}`);
  }
}

async function toApiError(resp: Response): Promise<ApiError> {
  let body: ErrorBody | null = null;
  try {
    body = (await resp.json()) as ErrorBody;
  } catch {
    // non-JSON error page; fall through to a generic error
  }
  if (body && typeof body.code === "string") {
    return new ApiError(body.code, resp.status, body.detail, body.extras ?? {});
  }
  return new ApiError("HTTP_" + resp.status, resp.status, resp.statusText);
}

export class ApiClient {
  // base "" means same origin, which is how `serve --ui-dir` mounts us
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) throw await toApiError(resp);
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(complaint: string): Promise<CreateSessionDoc> {
    return this.post("/api/v1/sessions", { complaint });
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request(`/api/v1/sessions/${encodeURIComponent(id)}`);
  }

  postAnswer(id: string, answer: string): Promise<AnswerDoc> {
    return this.post(`/api/v1/sessions/${encodeURIComponent(id)}/answers`, { answer });
  }

  getReminders(id: string, now?: string): Promise<RemindersDoc> {
    const query = now ? `?now=${encodeURIComponent(now)}` : "";
    return this.request(`/api/v1/sessions/${encodeURIComponent(id)}/reminders${query}`);
  }

  acknowledge(id: string, medicine: string, sequence: number): Promise<RemindersDoc> {
    return this.post(`/api/v1/sessions/${encodeURIComponent(id)}/reminders/acknowledgements`, {
      medicine,
      sequence,
    });
  }
}
