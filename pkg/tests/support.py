"""Shared builders and brute-force oracles for the test suite."""

from __future__ import annotations

import random
from typing import Any

from arginote.engine import (
    CreateSession,
    CreateTeam,
    Event,
    JoinTeam,
    SessionState,
    SubmitPaper,
    apply_command,
    initial_state,
)
from arginote.evaluator import Challenge, default_registry
from arginote.model import MiniPaper, PaperDraft, PaperKind

ORIGIN_2D = Challenge(
    id="origin-2d",
    kind="gaussian-proximity",
    params={"dimension": 2, "target": [0.0, 0.0]},
)


class ScriptedSession:
    """Drives the command path with a deterministic clock; collects the log."""

    def __init__(self, challenge: Challenge = ORIGIN_2D, start_at: int = 1_000_000, step: int = 10_000):
        self.clock = start_at
        self.step = step
        self.state: SessionState = initial_state()
        self.events: list[Event] = []
        self.registry = default_registry()
        self.session_id: str | None = None
        self._challenge = challenge

    def _run(self, cmd: Any, **kwargs: Any) -> list[Event]:
        self.clock += self.step
        self.state, events = apply_command(
            self.state, cmd, self.clock, registry=self.registry, **kwargs
        )
        self.events.extend(events)
        return events

    def create_session(self, session_id: str = "s1") -> str:
        self._run(CreateSession(self._challenge), session_id=session_id)
        self.session_id = session_id
        return session_id

    def create_team(self, name: str = "Team") -> str:
        events = self._run(CreateTeam(session=self.session_id, name=name))
        return events[0].body.team

    def join(self, team: str, name: str = "member") -> str:
        events = self._run(JoinTeam(team=team, display_name=name))
        return events[0].body.member

    def submit(self, team: str, author: str, draft: PaperDraft) -> MiniPaper:
        events = self._run(SubmitPaper(team=team, author=author, draft=draft))
        return events[0].body.paper


def solution_draft(
    title: str = "probe",
    params: list[float] | None = None,
    citations: tuple[str, ...] = (),
) -> PaperDraft:
    return PaperDraft(
        title=title,
        kind=PaperKind.SOLUTION,
        payload={"params": params if params is not None else [1.0, 1.0]},
        citations=citations,
    )


def argument_draft(
    title: str = "note",
    argument: str = "observations",
    citations: tuple[str, ...] = (),
    is_final: bool = False,
) -> PaperDraft:
    return PaperDraft(
        title=title,
        kind=PaperKind.ARGUMENT,
        argument=argument,
        citations=citations,
        is_final=is_final,
    )


def basic_team(session: ScriptedSession | None = None) -> tuple[ScriptedSession, str, str]:
    session = session or ScriptedSession()
    session.create_session()
    team = session.create_team("Team 1")
    member = session.join(team, "Ada")
    return session, team, member


def random_team_papers(
    session: ScriptedSession, team: str, author: str, rng: random.Random, count: int
) -> list[MiniPaper]:
    """Submit `count` randomly-citing papers through the full command path."""
    papers: list[MiniPaper] = []
    for index in range(count):
        cites = tuple(
            p.id for p in rng.sample(papers, k=rng.randint(0, min(3, len(papers))))
        )
        if rng.random() < 0.25:
            draft = argument_draft(title=f"note {index}", citations=cites)
        else:
            draft = solution_draft(
                title=f"probe {index}",
                params=[rng.uniform(-2, 2), rng.uniform(-2, 2)],
                citations=cites,
            )
        papers.append(session.submit(team, author, draft))
    return papers


# Brute-force graph oracles, independent of the graph implementation.


def oracle_cited_by(papers: list[MiniPaper], paper_id: str) -> set[str]:
    return {p.id for p in papers if paper_id in p.citations}


def oracle_lineage(papers: list[MiniPaper], paper_id: str) -> set[str]:
    by_id = {p.id: p for p in papers}
    seen: set[str] = set()

    def visit(pid: str) -> None:
        for cited in by_id[pid].citations:
            if cited not in seen:
                seen.add(cited)
                visit(cited)

    visit(paper_id)
    return seen


def oracle_edge_count(papers: list[MiniPaper]) -> int:
    return sum(len(p.citations) for p in papers)


def oracle_uncited(papers: list[MiniPaper]) -> set[str]:
    cited = {c for p in papers for c in p.citations}
    return {p.id for p in papers} - cited


def kahn_topological_sort(papers: list[MiniPaper]) -> list[str] | None:
    """Returns a topological order of the citation DAG, or None on a cycle."""
    ids = [p.id for p in papers]
    out_edges: dict[str, list[str]] = {pid: [] for pid in ids}
    in_degree: dict[str, int] = {pid: 0 for pid in ids}
    for p in papers:
        for cited in p.citations:
            out_edges[cited].append(p.id)  # cited must come before citing
            in_degree[p.id] += 1
    ready = sorted(pid for pid in ids if in_degree[pid] == 0)
    order: list[str] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for nxt in out_edges[node]:
            in_degree[nxt] -= 1
            if in_degree[nxt] == 0:
                ready.append(nxt)
    return order if len(order) == len(ids) else None
