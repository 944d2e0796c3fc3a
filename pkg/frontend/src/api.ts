import { DraftPayload, ErrorEnvelope, HealthResponse, RankResponse, TrendingResponse } from "./types.js";

/** Thrown for any non-2xx response; carries the server's error envelope. */
export class ApiError extends Error {
  status: number;
  code: string;
  fields: string[];

  constructor(status: number, code: string, message: string, fields?: string[]) {
    super(message);
    this.status = status;
    this.code = code;
    this.fields = fields ?? [];
  }
}

function apiBase(): string {
  // Same origin by default; a page served off localhost:8080 against a
  // service on :8000 can point elsewhere via window.TUBEPULSE_API.
  const override = (window as any).TUBEPULSE_API;
  return typeof override === "string" ? override.replace(/\/$/, "") : "";
}

async function parseError(response: Response): Promise<ApiError> {
  let envelope: ErrorEnvelope | null = null;
  try {
    envelope = await response.json();
  } catch {
    // non-JSON error body; fall through to a generic error
  }
  if (envelope && envelope.error && typeof envelope.error.code === "string") {
    const e = envelope.error;
    return new ApiError(response.status, e.code, e.message, e.fields);
  }
  return new ApiError(response.status, "http_error", `HTTP ${response.status}`);
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(`${apiBase()}${path}`);
  if (!response.ok) throw await parseError(response);
  return response.json();
}

export async function rankDraft(draft: DraftPayload): Promise<RankResponse> {
  const response = await fetch(`${apiBase()}/api/rank`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(draft),
  });
  if (!response.ok) throw await parseError(response);
  return response.json();
}

export function fetchTrending(): Promise<TrendingResponse> {
  return getJson<TrendingResponse>("/api/trending");
}

export function fetchHealth(): Promise<HealthResponse> {
  return getJson<HealthResponse>("/api/health");
}
