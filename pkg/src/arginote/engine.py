"""Deterministic session state machine: commands in, ordered events out.

The event log is the sole source of truth. Commands are validated against
replay-derived state; accepted commands emit events whose replay reproduces
the post-state exactly. Scores are computed once at admission and frozen
into the event, so replay never consults an evaluator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Union

from .canonical import canonical_text, digest_document, normalize_document
from .evaluator import (
    Challenge,
    DimensionMismatchError,
    EvaluatorRegistry,
    MalformedPayloadError,
    NonFiniteInputError,
    UnknownChallengeKindError,
    default_registry,
)
from .graph import CitationGraph
from .model import (
    Limits,
    MiniPaper,
    PaperDraft,
    PaperKind,
    Violation,
    WorkspaceView,
    draft_violations,
    paper_violations,
)

DEFAULT_LIMITS = Limits()


class CommandRejected(Exception):
    """Command refused; state unchanged, no event emitted."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(v.code for v in self.violations) or "rejected")

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


class CorruptLogError(Exception):
    """Event log violates structural invariants; signals storage corruption."""


class StorageFailureError(Exception):
    pass


# Commands carry no server-assigned fields; ids and seq are assigned here.


@dataclass(frozen=True)
class CreateSession:
    challenge: Challenge


@dataclass(frozen=True)
class CreateTeam:
    session: str
    name: str


@dataclass(frozen=True)
class JoinTeam:
    team: str
    display_name: str


@dataclass(frozen=True)
class SubmitPaper:
    team: str
    author: str
    draft: PaperDraft


Command = Union[CreateSession, CreateTeam, JoinTeam, SubmitPaper]


@dataclass(frozen=True)
class SessionCreated:
    session: str
    challenge: Challenge


@dataclass(frozen=True)
class TeamCreated:
    team: str
    name: str


@dataclass(frozen=True)
class MemberJoined:
    team: str
    member: str
    name: str


@dataclass(frozen=True)
class PaperSubmitted:
    paper: MiniPaper


EventBody = Union[SessionCreated, TeamCreated, MemberJoined, PaperSubmitted]

_BODY_KEYS = {
    "session_created": {"type", "session", "challenge"},
    "team_created": {"type", "team", "name"},
    "member_joined": {"type", "team", "member", "name"},
    "paper_submitted": {"type", "paper"},
}


@dataclass(frozen=True)
class Event:
    """One log entry. seq is gap-free from 1; at never decreases."""

    seq: int
    at: int
    body: EventBody

    def to_doc(self) -> dict[str, Any]:
        return {"seq": self.seq, "at": self.at, "body": _body_to_doc(self.body)}

    def to_line(self) -> str:
        return canonical_text(self.to_doc())

    @classmethod
    def from_doc(cls, doc: Any) -> "Event":
        if not isinstance(doc, Mapping) or set(doc) != {"seq", "at", "body"}:
            raise ValueError("event must be an object with exactly seq, at, body")
        seq = doc["seq"]
        at = doc["at"]
        if isinstance(seq, bool) or not isinstance(seq, int):
            raise ValueError("seq must be an integer")
        if isinstance(at, bool) or not isinstance(at, int):
            raise ValueError("at must be an integer")
        return cls(seq=seq, at=at, body=_body_from_doc(doc["body"]))


def _body_to_doc(body: EventBody) -> dict[str, Any]:
    if isinstance(body, SessionCreated):
        return {
            "type": "session_created",
            "session": body.session,
            "challenge": body.challenge.to_doc(),
        }
    if isinstance(body, TeamCreated):
        return {"type": "team_created", "team": body.team, "name": body.name}
    if isinstance(body, MemberJoined):
        return {
            "type": "member_joined",
            "team": body.team,
            "member": body.member,
            "name": body.name,
        }
    if isinstance(body, PaperSubmitted):
        return {"type": "paper_submitted", "paper": body.paper.to_doc()}
    raise TypeError(f"unknown event body: {body!r}")


def _body_from_doc(doc: Any) -> EventBody:
    if not isinstance(doc, Mapping):
        raise ValueError("event body must be an object")
    kind = doc.get("type")
    expected = _BODY_KEYS.get(kind) if isinstance(kind, str) else None
    if expected is None:
        raise ValueError(f"unknown event type: {kind!r}")
    if set(doc) != expected:
        raise ValueError(f"event body for {kind} has wrong fields: {sorted(doc)}")
    if kind == "session_created":
        return SessionCreated(
            session=_doc_str(doc, "session"), challenge=Challenge.from_doc(doc["challenge"])
        )
    if kind == "team_created":
        return TeamCreated(team=_doc_str(doc, "team"), name=_doc_str(doc, "name"))
    if kind == "member_joined":
        return MemberJoined(
            team=_doc_str(doc, "team"),
            member=_doc_str(doc, "member"),
            name=_doc_str(doc, "name"),
        )
    return PaperSubmitted(paper=MiniPaper.from_doc(doc["paper"]))


def _doc_str(doc: Mapping[str, Any], key: str) -> str:
    value = doc[key]
    if not isinstance(value, str) or not value:
        raise ValueError(f"{key} must be a non-empty string")
    return value


@dataclass(frozen=True)
class Member:
    id: str
    name: str
    joined_at: int


@dataclass(frozen=True)
class TeamState:
    id: str
    name: str
    created_at: int
    members: tuple[Member, ...] = ()
    papers: tuple[MiniPaper, ...] = ()
    graph: CitationGraph = field(default_factory=CitationGraph)
    final_paper: str | None = None

    def member_ids(self) -> frozenset[str]:
        return frozenset(m.id for m in self.members)

    def paper_seqs(self) -> dict[str, int]:
        return {p.id: p.seq for p in self.papers}


@dataclass(frozen=True)
class SessionState:
    """Pure function of the event prefix; never mutated in place."""

    session_id: str | None = None
    challenge: Challenge | None = None
    created_at: int | None = None
    last_seq: int = 0
    last_at: int = 0
    teams: Mapping[str, TeamState] = field(default_factory=dict)
    used_ids: frozenset[str] = frozenset()


def initial_state() -> SessionState:
    return SessionState()


def workspace_view(state: SessionState, team_id: str, limits: Limits = DEFAULT_LIMITS) -> WorkspaceView:
    team = state.teams[team_id]
    paper_teams = {p.id: t.id for t in state.teams.values() for p in t.papers}
    return WorkspaceView(
        team=team_id,
        team_paper_seqs=team.paper_seqs(),
        paper_teams=paper_teams,
        has_final=team.final_paper is not None,
        limits=limits,
    )


def apply_event(state: SessionState, event: Event, limits: Limits = DEFAULT_LIMITS) -> SessionState:
    """Fold one event into the state, checking every structural invariant."""
    if event.seq != state.last_seq + 1:
        raise CorruptLogError(f"seq {event.seq} after {state.last_seq}: gap or duplicate")
    if event.at < state.last_at:
        raise CorruptLogError(f"timestamp {event.at} decreases below {state.last_at}")
    body = event.body

    if isinstance(body, SessionCreated):
        if state.session_id is not None or state.last_seq != 0:
            raise CorruptLogError("session created twice")
        return replace(
            state,
            session_id=body.session,
            challenge=body.challenge,
            created_at=event.at,
            last_seq=event.seq,
            last_at=event.at,
            used_ids=state.used_ids | {body.session},
        )

    if state.session_id is None:
        raise CorruptLogError("event before session creation")

    if isinstance(body, TeamCreated):
        if body.team in state.used_ids:
            raise CorruptLogError(f"id {body.team} reused")
        teams = dict(state.teams)
        teams[body.team] = TeamState(id=body.team, name=body.name, created_at=event.at)
        return replace(
            state,
            teams=teams,
            last_seq=event.seq,
            last_at=event.at,
            used_ids=state.used_ids | {body.team},
        )

    if isinstance(body, MemberJoined):
        team = state.teams.get(body.team)
        if team is None:
            raise CorruptLogError(f"member joined unknown team {body.team}")
        if body.member in state.used_ids:
            raise CorruptLogError(f"id {body.member} reused")
        member = Member(id=body.member, name=body.name, joined_at=event.at)
        teams = dict(state.teams)
        teams[body.team] = replace(team, members=team.members + (member,))
        return replace(
            state,
            teams=teams,
            last_seq=event.seq,
            last_at=event.at,
            used_ids=state.used_ids | {body.member},
        )

    if isinstance(body, PaperSubmitted):
        paper = body.paper
        team = state.teams.get(paper.team)
        if team is None:
            raise CorruptLogError(f"paper for unknown team {paper.team}")
        if paper.id in state.used_ids:
            raise CorruptLogError(f"id {paper.id} reused")
        if paper.seq != event.seq:
            raise CorruptLogError(f"paper seq {paper.seq} != event seq {event.seq}")
        if paper.submitted_at != event.at:
            raise CorruptLogError(f"paper timestamp {paper.submitted_at} != event at {event.at}")
        problems = paper_violations(paper, workspace_view(state, paper.team, limits))
        if problems:
            raise CorruptLogError(f"paper {paper.id} violates invariants: {problems}")
        teams = dict(state.teams)
        teams[paper.team] = replace(
            team,
            papers=team.papers + (paper,),
            graph=team.graph.add_paper(paper),
            final_paper=paper.id if paper.is_final else team.final_paper,
        )
        return replace(
            state,
            teams=teams,
            last_seq=event.seq,
            last_at=event.at,
            used_ids=state.used_ids | {paper.id},
        )

    raise CorruptLogError(f"unknown event body: {body!r}")


def apply_command(
    state: SessionState,
    cmd: Command,
    now: int,
    *,
    registry: EvaluatorRegistry | None = None,
    session_id: str | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[SessionState, list[Event]]:
    """Validate, order, and apply one command.

    Raises CommandRejected (state untouched, nothing emitted) on any rule
    violation. On success the returned events, replayed over `state`,
    reproduce the returned state exactly.
    """
    at = max(now, state.last_at)
    seq = state.last_seq + 1

    if isinstance(cmd, CreateSession):
        if state.session_id is not None:
            raise CommandRejected([Violation("SessionAlreadyExists", "session already created")])
        if session_id is None:
            raise ValueError("session_id must be supplied for CreateSession")
        events = [Event(seq=seq, at=at, body=SessionCreated(session_id, cmd.challenge))]

    elif isinstance(cmd, CreateTeam):
        if state.session_id is None or cmd.session != state.session_id:
            raise CommandRejected(
                [Violation("UnknownSession", f"no session {cmd.session!r} here")]
            )
        events = [Event(seq=seq, at=at, body=TeamCreated(team=f"t{seq}", name=cmd.name))]

    elif isinstance(cmd, JoinTeam):
        if cmd.team not in state.teams:
            raise CommandRejected([Violation("UnknownTeam", f"no team {cmd.team!r}")])
        body = MemberJoined(team=cmd.team, member=f"m{seq}", name=cmd.display_name)
        events = [Event(seq=seq, at=at, body=body)]

    elif isinstance(cmd, SubmitPaper):
        events = [_admit_paper(state, cmd, seq, at, registry or default_registry(), limits)]

    else:
        raise TypeError(f"unknown command: {cmd!r}")

    new_state = state
    for event in events:
        new_state = apply_event(new_state, event, limits)
    return new_state, events


def _admit_paper(
    state: SessionState,
    cmd: SubmitPaper,
    seq: int,
    at: int,
    registry: EvaluatorRegistry,
    limits: Limits,
) -> Event:
    team = state.teams.get(cmd.team)
    if team is None:
        raise CommandRejected([Violation("UnknownTeam", f"no team {cmd.team!r}")])
    if cmd.author not in team.member_ids():
        raise CommandRejected(
            [Violation("UnknownMember", f"{cmd.author!r} is not a member of {cmd.team}")]
        )
    violations = draft_violations(cmd.draft, workspace_view(state, cmd.team, limits))
    if violations:
        raise CommandRejected(violations)

    draft = cmd.draft
    payload = normalize_document(draft.payload) if draft.payload is not None else None
    score: float | None = None
    if draft.kind is PaperKind.SOLUTION:
        assert state.challenge is not None
        try:
            score = registry.evaluate(state.challenge, payload)
        except UnknownChallengeKindError as exc:
            raise CommandRejected(
                [Violation("UnknownChallengeKind", f"no evaluator for kind {exc.args[0]!r}")]
            ) from exc
        except MalformedPayloadError as exc:
            raise CommandRejected([Violation("MalformedPayload", str(exc))]) from exc
        except DimensionMismatchError as exc:
            raise CommandRejected([Violation("DimensionMismatch", str(exc))]) from exc
        except NonFiniteInputError as exc:
            raise CommandRejected([Violation("NonFiniteInput", str(exc))]) from exc

    paper = MiniPaper(
        id=f"p{seq}",
        team=cmd.team,
        author=cmd.author,
        seq=seq,
        submitted_at=at,
        title=draft.title,
        kind=draft.kind,
        argument=draft.argument,
        payload=payload,
        score=score,
        citations=tuple(draft.citations),
        is_final=draft.is_final,
    )
    return Event(seq=seq, at=at, body=PaperSubmitted(paper))


def replay(events: Iterable[Event], limits: Limits = DEFAULT_LIMITS) -> SessionState:
    """Deterministic fold; same log yields the same state on every run."""
    state = initial_state()
    for event in events:
        state = apply_event(state, event, limits)
    return state


def parse_log_bytes(data: bytes) -> list[Event]:
    """Parse a JSONL log, raising CorruptLogError on any malformed byte."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptLogError(f"log is not valid UTF-8: {exc}") from exc
    events: list[Event] = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for index, line in enumerate(lines, start=1):
        try:
            doc = json.loads(line, parse_constant=_reject_constant)
        except ValueError as exc:
            raise CorruptLogError(f"line {index} is not valid JSON: {exc}") from exc
        try:
            events.append(Event.from_doc(doc))
        except ValueError as exc:
            raise CorruptLogError(f"line {index}: {exc}") from exc
    return events


def _reject_constant(value: str) -> Any:
    raise ValueError(f"non-finite constant {value} not allowed")


def replay_log_bytes(data: bytes, limits: Limits = DEFAULT_LIMITS) -> SessionState:
    return replay(parse_log_bytes(data), limits)


def state_doc(state: SessionState) -> dict[str, Any]:
    """Canonical serialization of derived state (teams sorted, papers in seq order)."""
    return {
        "session": state.session_id,
        "challenge": state.challenge.to_doc() if state.challenge else None,
        "created_at": state.created_at,
        "last_seq": state.last_seq,
        "last_at": state.last_at,
        "teams": [
            {
                "id": team.id,
                "name": team.name,
                "created_at": team.created_at,
                "members": [
                    {"id": m.id, "name": m.name, "joined_at": m.joined_at}
                    for m in team.members
                ],
                "papers": [p.to_doc() for p in team.papers],
            }
            for _, team in sorted(state.teams.items())
        ],
    }


def state_digest(state: SessionState) -> str:
    """Collision-resistant fingerprint; equal states yield equal digests."""
    return digest_document(state_doc(state))


def team_workspace_doc(state: SessionState, team_id: str) -> dict[str, Any]:
    """The wire shape of one team's workspace: papers plus citation edges."""
    team = state.teams[team_id]
    return {
        "papers": [p.to_doc() for p in team.papers],
        "edges": [[citing, cited] for citing, cited in team.graph.edges()],
    }


def workspace_digest(doc: Mapping[str, Any]) -> str:
    return digest_document(doc)
