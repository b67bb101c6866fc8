// Request building and error mapping for the workspace API. The submit flow
// validates the payload text client-side (a paper never leaves the form with
// unparseable JSON) and maps server violations back onto form fields.

import type { WireError, WireViolation, WorkspaceResponse } from "./types.js";

export interface SubmitForm {
  author: string;
  title: string;
  kind: "solution" | "argument";
  argument: string;
  payloadText: string; // raw JSON text; empty means "no payload"
  citations: string[];
  isFinal: boolean;
}

export interface SubmitBody {
  author: string;
  title: string;
  kind: "solution" | "argument";
  argument: string;
  payload?: unknown;
  citations: string[];
  is_final: boolean;
}

export type FormField = "title" | "payload" | "citations" | "final" | "form";

export interface FieldError {
  field: FormField;
  message: string;
}

export type BuildResult =
  | { ok: true; body: SubmitBody }
  | { ok: false; errors: FieldError[] };

/** Build the POST body, or report client-side problems without a request. */
export function buildSubmitRequest(form: SubmitForm): BuildResult {
  const errors: FieldError[] = [];
  let payload: unknown;
  const text = form.payloadText.trim();
  if (text.length > 0) {
    try {
      payload = JSON.parse(text);
    } catch (exc) {
      errors.push({ field: "payload", message: `payload is not valid JSON: ${exc}` });
    }
  } else if (form.kind === "solution") {
    errors.push({ field: "payload", message: "solution papers need a JSON payload" });
  }
  if (form.title.length === 0) {
    errors.push({ field: "title", message: "title must not be empty" });
  }
  if (errors.length > 0) {
    return { ok: false, errors };
  }
  const body: SubmitBody = {
    author: form.author,
    title: form.title,
    kind: form.kind,
    argument: form.argument,
    citations: [...form.citations],
    is_final: form.isFinal,
  };
  if (payload !== undefined) {
    body.payload = payload;
  }
  return { ok: true, body };
}

const VIOLATION_FIELDS: Record<string, FormField> = {
  EmptyTitle: "title",
  TitleTooLong: "title",
  MissingPayload: "payload",
  PayloadTooLarge: "payload",
  NonFiniteNumber: "payload",
  MalformedPayload: "payload",
  DimensionMismatch: "payload",
  NonFiniteInput: "payload",
  UnknownCitation: "citations",
  CrossTeamCitation: "citations",
  DuplicateCitation: "citations",
  SelfCitation: "citations",
  FinalOnSolution: "final",
  FinalAlreadyExists: "final",
};

/** Map server violations to inline form errors; every violation surfaces. */
export function violationsToFieldErrors(violations: WireViolation[]): FieldError[] {
  return violations.map((violation) => ({
    field: VIOLATION_FIELDS[violation.code] ?? "form",
    message: violation.paper ? `${violation.detail} (${violation.paper})` : violation.detail,
  }));
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: WireError,
  ) {
    super(`${payload.error}: ${payload.detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const doc = (await response.json()) as T | WireError;
  if (!response.ok) {
    throw new ApiError(response.status, doc as WireError);
  }
  return doc as T;
}

function post<T>(url: string, body: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

/** Thin fetch wrapper over the service endpoints. */
export class ApiClient {
  constructor(readonly baseUrl: string) {}

  createSession(challengeId: string): Promise<{ session_id: string; seq: number }> {
    return post(`${this.baseUrl}/v1/sessions`, { challenge_id: challengeId });
  }

  createTeam(sessionId: string, name: string): Promise<{ team_id: string; seq: number }> {
    return post(`${this.baseUrl}/v1/sessions/${sessionId}/teams`, { name });
  }

  joinTeam(teamId: string, displayName: string): Promise<{ member_id: string; seq: number }> {
    return post(`${this.baseUrl}/v1/teams/${teamId}/members`, { display_name: displayName });
  }

  submitPaper(
    teamId: string,
    body: SubmitBody,
  ): Promise<{ paper_id: string; seq: number; score?: number }> {
    return post(`${this.baseUrl}/v1/teams/${teamId}/papers`, body);
  }

  workspace(teamId: string): Promise<WorkspaceResponse> {
    return request(`${this.baseUrl}/v1/teams/${teamId}/workspace`);
  }

  streamUrl(teamId: string, fromSeq: number): string {
    const ws = this.baseUrl.replace(/^http/, "ws");
    return `${ws}/v1/teams/${teamId}/stream?from_seq=${fromSeq}`;
  }
}
