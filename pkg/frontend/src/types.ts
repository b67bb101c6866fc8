// Wire shapes (mirroring the service API) and the client-side view model.

export type PaperKind = "solution" | "argument";

export interface WirePaper {
  id: string;
  team: string;
  author: string;
  seq: number;
  submitted_at: number;
  title: string;
  kind: PaperKind;
  argument: string;
  citations: string[];
  is_final: boolean;
  payload?: unknown;
  score?: number;
}

export interface WireChallenge {
  id: string;
  kind: string;
  params: Record<string, unknown>;
}

export type WireEventBody =
  | { type: "session_created"; session: string; challenge: WireChallenge }
  | { type: "team_created"; team: string; name: string }
  | { type: "member_joined"; team: string; member: string; name: string }
  | { type: "paper_submitted"; paper: WirePaper };

export interface StreamEvent {
  type: "event";
  seq: number;
  at: number;
  body: WireEventBody;
}

export type StreamMessage = StreamEvent | { type: "heartbeat" };

export interface WireViolation {
  code: string;
  detail: string;
  paper?: string;
}

export interface WireError {
  error: string;
  detail: string;
  violations: WireViolation[];
}

export interface WorkspaceResponse {
  papers: WirePaper[];
  edges: [string, string][];
}

// View model: a pure projection of the received event stream.

export interface PaperView {
  id: string;
  title: string;
  kind: PaperKind;
  author: string;
  argument: string;
  payload?: unknown;
  score?: number;
  isFinal: boolean;
  submittedAt: number;
  cites: string[];
  citedBy: string[];
}

export interface TrajectoryPoint {
  paper: string;
  t: number;
  score: number;
  isCited: boolean;
  isCiting: boolean;
  isFinalAnalysis: boolean;
  scoreSynthetic: boolean;
}

export interface WorkspaceViewModel {
  team: string;
  sessionStartAt: number | null;
  papers: PaperView[];
  members: Record<string, string>;
  selection: string | null;
  trajectory: TrajectoryPoint[];
  connection: { connected: boolean; lastSeq: number };
}
