// Pure reducer over the event stream. The view model is never mutated in
// place; every transition returns a fresh value, so replaying the same
// events always yields structurally identical models.

import type {
  PaperView,
  StreamEvent,
  TrajectoryPoint,
  WirePaper,
  WorkspaceViewModel,
} from "./types.js";

export type ApplyStatus = "applied" | "duplicate" | "gap";

export interface ApplyResult {
  vm: WorkspaceViewModel;
  status: ApplyStatus;
}

export function initialViewModel(team: string): WorkspaceViewModel {
  return {
    team,
    sessionStartAt: null,
    papers: [],
    members: {},
    selection: null,
    trajectory: [],
    connection: { connected: false, lastSeq: 0 },
  };
}

export function setConnected(vm: WorkspaceViewModel, connected: boolean): WorkspaceViewModel {
  return { ...vm, connection: { ...vm.connection, connected } };
}

export function selectPaper(vm: WorkspaceViewModel, id: string | null): WorkspaceViewModel {
  if (id !== null && !vm.papers.some((p) => p.id === id)) {
    return vm; // unknown id: no-op
  }
  return { ...vm, selection: id };
}

/** Apply one stream event. Duplicates leave the model untouched; a gap
 * means events were missed and the caller must resubscribe from lastSeq. */
export function applyStreamEvent(vm: WorkspaceViewModel, event: StreamEvent): ApplyResult {
  const expected = vm.connection.lastSeq + 1;
  if (event.seq < expected) {
    return { vm, status: "duplicate" };
  }
  if (event.seq > expected) {
    return { vm, status: "gap" };
  }

  let next: WorkspaceViewModel = {
    ...vm,
    connection: { ...vm.connection, lastSeq: event.seq },
  };
  const body = event.body;
  if (body.type === "session_created") {
    next = { ...next, sessionStartAt: event.at };
  } else if (body.type === "member_joined" && body.team === vm.team) {
    next = { ...next, members: { ...vm.members, [body.member]: body.name } };
  } else if (body.type === "paper_submitted" && body.paper.team === vm.team) {
    next = appendPaper(next, body.paper);
  }
  return { vm: next, status: "applied" };
}

function appendPaper(vm: WorkspaceViewModel, wire: WirePaper): WorkspaceViewModel {
  const cited = new Set(wire.citations);
  const papers = vm.papers.map((p) =>
    cited.has(p.id) ? { ...p, citedBy: [...p.citedBy, wire.id] } : p,
  );
  papers.push({
    id: wire.id,
    title: wire.title,
    kind: wire.kind,
    author: wire.author,
    argument: wire.argument,
    payload: wire.payload,
    score: wire.score,
    isFinal: wire.is_final,
    submittedAt: wire.submitted_at,
    cites: [...wire.citations],
    citedBy: [],
  });
  return { ...vm, papers, trajectory: trajectoryOf(papers, vm.sessionStartAt) };
}

/** One plottable point per paper: solutions at their own score, arguments
 * at the team's running best (marked synthetic). */
export function trajectoryOf(
  papers: PaperView[],
  sessionStartAt: number | null,
): TrajectoryPoint[] {
  const start = sessionStartAt ?? 0;
  let best = 0;
  return papers.map((paper) => {
    let score: number;
    let synthetic: boolean;
    if (paper.score !== undefined) {
      best = Math.max(best, paper.score);
      score = paper.score;
      synthetic = false;
    } else {
      score = best;
      synthetic = true;
    }
    return {
      paper: paper.id,
      t: (paper.submittedAt - start) / 1000,
      score,
      isCited: paper.citedBy.length > 0,
      isCiting: paper.cites.length > 0,
      isFinalAnalysis: paper.isFinal,
      scoreSynthetic: synthetic,
    };
  });
}

export interface DetailView {
  id: string;
  title: string;
  author: string;
  kind: PaperView["kind"];
  argument: string;
  payloadText: string | null;
  score?: number;
  isFinal: boolean;
  cites: string[];
  citedBy: string[];
}

/** Detail panel contents for one paper, or null for an unknown id. */
export function openPaper(vm: WorkspaceViewModel, id: string): DetailView | null {
  const paper = vm.papers.find((p) => p.id === id);
  if (!paper) {
    return null;
  }
  return {
    id: paper.id,
    title: paper.title,
    author: vm.members[paper.author] ?? paper.author,
    kind: paper.kind,
    argument: paper.argument,
    payloadText:
      paper.payload === undefined ? null : JSON.stringify(paper.payload, null, 2),
    score: paper.score,
    isFinal: paper.isFinal,
    cites: [...paper.cites],
    citedBy: [...paper.citedBy],
  };
}
