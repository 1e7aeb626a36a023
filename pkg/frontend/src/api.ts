/**
 * HTTP client for the consultation service.
 *
 * The fetch implementation is injected so tests can substitute a
 * recorded-response stub, and all requests issued through one client
 * are serialized: the browser tab holds a single session, and the
 * service applies evidence replacements in order, so overlapping
 * writes from one tab would race each other.
 */

import type {
  DiagnosisRow,
  EntryProblem,
  EvidenceEntry,
  ExplanationNode,
  FramesPayload,
  SessionInfo,
  WhatifResult,
} from "./model.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Error carrying the service's status code and decoded detail. */
export class ApiError extends Error {
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, detail: unknown) {
    super(typeof detail === "string" ? detail : `request failed (${status})`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }

  /** Per-entry problems from a rejected evidence submission, if present. */
  entryProblems(): EntryProblem[] {
    if (!Array.isArray(this.detail)) return [];
    return this.detail.filter(
      (row): row is EntryProblem =>
        typeof row === "object" &&
        row !== null &&
        typeof (row as EntryProblem).index === "number" &&
        typeof (row as EntryProblem).error === "string",
    );
  }
}

export class ConsultClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(base: string, fetchImpl?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  createSession(): Promise<SessionInfo> {
    return this.request<SessionInfo>("POST", "/sessions");
  }

  async putEvidence(
    sessionId: string,
    entries: EvidenceEntry[],
  ): Promise<DiagnosisRow[]> {
    const payload = await this.request<{ diagnoses: DiagnosisRow[] }>(
      "PUT",
      `/sessions/${encodeURIComponent(sessionId)}/evidence`,
      { entries },
    );
    return payload.diagnoses;
  }

  async getDiagnoses(sessionId: string): Promise<DiagnosisRow[]> {
    const payload = await this.request<{ diagnoses: DiagnosisRow[] }>(
      "GET",
      `/sessions/${encodeURIComponent(sessionId)}/diagnoses`,
    );
    return payload.diagnoses;
  }

  async getExplanation(
    sessionId: string,
    hypothesis: string,
    depth: number,
  ): Promise<ExplanationNode[]> {
    const path =
      `/sessions/${encodeURIComponent(sessionId)}` +
      `/explanations/${encodeURIComponent(hypothesis)}?depth=${depth}`;
    const payload = await this.request<{ nodes: ExplanationNode[] }>("GET", path);
    return payload.nodes;
  }

  whatif(sessionId: string, entries: EvidenceEntry[]): Promise<WhatifResult> {
    return this.request<WhatifResult>(
      "POST",
      `/sessions/${encodeURIComponent(sessionId)}/whatif`,
      { entries },
    );
  }

  getFrames(): Promise<FramesPayload> {
    return this.request<FramesPayload>("GET", "/kb/frames");
  }

  /** Chain the call onto the tab's queue so requests never overlap. */
  private request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const run = () => this.send<T>(method, path, body);
    const next = this.queue.then(run, run);
    this.queue = next.catch(() => undefined);
    return next;
  }

  private async send<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      let detail: unknown = null;
      try {
        const payload = (await response.json()) as { detail?: unknown };
        detail = payload?.detail ?? payload;
      } catch {
        detail = null;
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }
}
