/**
 * Typed client for the drafting service. Draft syncs are single-flight: a
 * new PUT aborts any in-flight one, so responses can only arrive in order.
 */

import type { SubmissionRecord, WireReport } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let code = "HttpError";
  let message = resp.statusText;
  try {
    const body = (await resp.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(resp.status, code, message);
}

export class ApiClient {
  private draftAbort: AbortController | null = null;

  constructor(
    readonly baseUrl = "",
    readonly fetchFn: typeof fetch = fetch,
  ) {}

  async createSession(gameDurationS: number | null): Promise<string> {
    const body =
      gameDurationS === null ? {} : { game: { duration_s: gameDurationS } };
    const resp = await this.fetchFn(`${this.baseUrl}/api/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw await parseError(resp);
    const payload = (await resp.json()) as { session_id: string };
    return payload.session_id;
  }

  /** PUT the draft; any still-running draft sync is aborted first. */
  async putDraft(
    sessionId: string,
    text: string,
    answer: string,
  ): Promise<WireReport> {
    if (this.draftAbort !== null) this.draftAbort.abort();
    const controller = new AbortController();
    this.draftAbort = controller;
    try {
      const resp = await this.fetchFn(
        `${this.baseUrl}/api/sessions/${sessionId}/draft`,
        {
          method: "PUT",
          headers: { "Content-Type": "application/json" },
          body: JSON.stringify({ text, answer }),
          signal: controller.signal,
        },
      );
      if (!resp.ok) throw await parseError(resp);
      return (await resp.json()) as WireReport;
    } finally {
      if (this.draftAbort === controller) this.draftAbort = null;
    }
  }

  async submit(sessionId: string): Promise<SubmissionRecord> {
    const resp = await this.fetchFn(
      `${this.baseUrl}/api/sessions/${sessionId}/submit`,
      { method: "POST" },
    );
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as SubmissionRecord;
  }
}
