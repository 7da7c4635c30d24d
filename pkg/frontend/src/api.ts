/** Thin client for the review service's REST API. */

import type {
  FeatureValues,
  LegalityManifest,
  PatchUnitResponse,
  SessionInfo,
  SessionReport,
  StatementPayload,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`service responded ${status}`);
  }
}

export class ReviewApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) =>
      fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined
        ? { "Content-Type": "application/json" }
        : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, payload?.detail ?? payload);
    }
    return payload as T;
  }

  createSession(participantId: string): Promise<SessionInfo> {
    return this.request("POST", "/sessions", { participant_id: participantId });
  }

  getStatements(sessionId: string): Promise<StatementPayload[]> {
    return this.request("GET", `/sessions/${sessionId}/statements`);
  }

  patchUnit(
    sessionId: string,
    unitId: string,
    features: Partial<FeatureValues> & Record<string, unknown>,
    version: number,
  ): Promise<PatchUnitResponse> {
    return this.request("PATCH", `/sessions/${sessionId}/units/${unitId}`, {
      features,
      version,
    });
  }

  completeSession(sessionId: string): Promise<{ completed: boolean }> {
    return this.request("POST", `/sessions/${sessionId}/complete`);
  }

  getReport(sessionId: string): Promise<SessionReport> {
    return this.request("GET", `/sessions/${sessionId}/report`);
  }

  getLegality(): Promise<LegalityManifest> {
    return this.request("GET", "/legality");
  }
}
