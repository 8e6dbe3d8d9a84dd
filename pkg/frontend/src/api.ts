import type { ArtifactList, ResultRecord, Session } from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { 'content-type': 'application/json' },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof body === 'object' && body !== null && 'detail' in body
        ? String((body as { detail: unknown }).detail)
        : response.statusText;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

/** Thin typed client for the session endpoints. */
export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, '')}${path}`;
  }

  createSession(overrides: Record<string, unknown> = {}): Promise<Session> {
    return request<Session>(this.url('/sessions'), {
      method: 'POST',
      body: JSON.stringify(overrides),
    });
  }

  getSession(sessionId: string): Promise<Session> {
    return request<Session>(this.url(`/sessions/${sessionId}`));
  }

  submitAnswer(sessionId: string, queryId: string, value: string): Promise<Session> {
    return request<Session>(this.url(`/sessions/${sessionId}/answer`), {
      method: 'POST',
      body: JSON.stringify({ query_id: queryId, value }),
    });
  }

  getResult(sessionId: string): Promise<ResultRecord> {
    return request<ResultRecord>(this.url(`/sessions/${sessionId}/result`));
  }

  getArtifacts(sessionId: string): Promise<ArtifactList> {
    return request<ArtifactList>(this.url(`/sessions/${sessionId}/artifacts`));
  }
}
