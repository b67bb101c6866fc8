"""Domain records and draft validation for team workspaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

from .canonical import NonFiniteNumberError, canonical_bytes

MAX_TITLE_CHARS = 200
MAX_PAYLOAD_BYTES = 1 << 20


class PaperKind(str, Enum):
    SOLUTION = "solution"
    ARGUMENT = "argument"


@dataclass(frozen=True)
class Limits:
    """Configurable admission caps."""

    max_title_chars: int = MAX_TITLE_CHARS
    max_payload_bytes: int = MAX_PAYLOAD_BYTES


@dataclass(frozen=True)
class Violation:
    """A single broken admission rule, wire shape {code, detail, paper?}."""

    code: str
    detail: str
    paper: str | None = None

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"code": self.code, "detail": self.detail}
        if self.paper is not None:
            doc["paper"] = self.paper
        return doc


class DraftInvalid(Exception):
    """Draft broke one or more admission rules; carries the full list."""

    def __init__(self, violations: list[Violation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(v.code for v in violations) or "invalid draft")


@dataclass(frozen=True)
class PaperDraft:
    """Client-submitted content; ids, seq, and score are assigned at admission."""

    title: str
    kind: PaperKind
    argument: str = ""
    payload: Any | None = None
    citations: tuple[str, ...] = ()
    is_final: bool = False


@dataclass(frozen=True)
class ValidatedDraft:
    draft: PaperDraft
    payload_bytes: bytes | None = None


@dataclass(frozen=True)
class MiniPaper:
    """Immutable contribution record. Never edited or deleted once admitted."""

    id: str
    team: str
    author: str
    seq: int
    submitted_at: int
    title: str
    kind: PaperKind
    argument: str = ""
    payload: Any | None = None
    score: float | None = None
    citations: tuple[str, ...] = ()
    is_final: bool = False

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "id": self.id,
            "team": self.team,
            "author": self.author,
            "seq": self.seq,
            "submitted_at": self.submitted_at,
            "title": self.title,
            "kind": self.kind.value,
            "argument": self.argument,
            "citations": list(self.citations),
            "is_final": self.is_final,
        }
        if self.payload is not None:
            doc["payload"] = self.payload
        if self.score is not None:
            doc["score"] = self.score
        return doc

    _DOC_KEYS = frozenset(
        {
            "id", "team", "author", "seq", "submitted_at", "title", "kind",
            "argument", "citations", "is_final", "payload", "score",
        }
    )

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "MiniPaper":
        try:
            unknown = set(doc) - cls._DOC_KEYS
            if unknown:
                raise ValueError(f"unknown fields: {sorted(unknown)}")
            kind = PaperKind(doc["kind"])
            paper = cls(
                id=_req_str(doc, "id"),
                team=_req_str(doc, "team"),
                author=_req_str(doc, "author"),
                seq=_req_int(doc, "seq"),
                submitted_at=_req_int(doc, "submitted_at"),
                title=_req_str(doc, "title"),
                kind=kind,
                argument=_req_str(doc, "argument"),
                payload=doc.get("payload"),
                score=_opt_number(doc, "score"),
                citations=tuple(_req_str_list(doc, "citations")),
                is_final=_req_bool(doc, "is_final"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed paper record: {exc}") from exc
        return paper


@dataclass(frozen=True)
class WorkspaceView:
    """What admission needs to know about the draft's team and its session.

    `team_paper_seqs` maps the team's own paper ids to their seq numbers;
    `paper_teams` maps every paper id in the session to its owning team.
    """

    team: str
    team_paper_seqs: Mapping[str, int] = field(default_factory=dict)
    paper_teams: Mapping[str, str] = field(default_factory=dict)
    has_final: bool = False
    limits: Limits = Limits()


def draft_violations(draft: PaperDraft, workspace: WorkspaceView) -> list[Violation]:
    """Every admission rule `draft` breaks against the current workspace."""
    violations: list[Violation] = []
    limits = workspace.limits

    if len(draft.title) == 0:
        violations.append(Violation("EmptyTitle", "title must not be empty"))
    elif len(draft.title) > limits.max_title_chars:
        violations.append(
            Violation(
                "TitleTooLong",
                f"title is {len(draft.title)} chars, cap is {limits.max_title_chars}",
            )
        )

    seen: set[str] = set()
    for cited in draft.citations:
        if cited in seen:
            violations.append(
                Violation("DuplicateCitation", f"{cited} cited more than once", paper=cited)
            )
            continue
        seen.add(cited)
        if cited in workspace.team_paper_seqs:
            continue
        owner = workspace.paper_teams.get(cited)
        if owner is not None and owner != workspace.team:
            violations.append(
                Violation("CrossTeamCitation", f"{cited} belongs to team {owner}", paper=cited)
            )
        else:
            violations.append(
                Violation("UnknownCitation", f"{cited} is not in this workspace", paper=cited)
            )

    if draft.kind is PaperKind.SOLUTION:
        if draft.payload is None:
            violations.append(Violation("MissingPayload", "solution papers require a payload"))
        if draft.is_final:
            violations.append(
                Violation("FinalOnSolution", "only an argument paper can be marked final")
            )
    if draft.is_final and draft.kind is PaperKind.ARGUMENT and workspace.has_final:
        violations.append(
            Violation("FinalAlreadyExists", "the team already has a final analysis paper")
        )

    if draft.payload is not None:
        try:
            encoded = canonical_bytes(draft.payload)
        except NonFiniteNumberError as exc:
            violations.append(Violation("NonFiniteNumber", str(exc)))
        else:
            if len(encoded) > limits.max_payload_bytes:
                violations.append(
                    Violation(
                        "PayloadTooLarge",
                        f"payload is {len(encoded)} bytes, cap is {limits.max_payload_bytes}",
                    )
                )

    return violations


def validate_draft(draft: PaperDraft, workspace: WorkspaceView) -> ValidatedDraft:
    """Admit `draft` or raise DraftInvalid carrying every broken rule."""
    violations = draft_violations(draft, workspace)
    if violations:
        raise DraftInvalid(violations)
    payload_bytes = canonical_bytes(draft.payload) if draft.payload is not None else None
    return ValidatedDraft(draft=draft, payload_bytes=payload_bytes)


def paper_violations(paper: MiniPaper, workspace: WorkspaceView) -> list[Violation]:
    """Structural checks for an already-built record (log integrity path).

    Covers the rules draft validation cannot reach: self-citation, citation
    seq ordering, score bounds, and kind/score coherence.
    """
    draft = PaperDraft(
        title=paper.title,
        kind=paper.kind,
        argument=paper.argument,
        payload=paper.payload,
        citations=paper.citations,
        is_final=paper.is_final,
    )
    violations = draft_violations(draft, workspace)
    for cited in paper.citations:
        if cited == paper.id:
            violations.append(Violation("SelfCitation", f"{paper.id} cites itself", paper=cited))
        else:
            cited_seq = workspace.team_paper_seqs.get(cited)
            if cited_seq is not None and cited_seq >= paper.seq:
                violations.append(
                    Violation(
                        "CitationOrder",
                        f"{cited} (seq {cited_seq}) does not precede seq {paper.seq}",
                        paper=cited,
                    )
                )
    if paper.kind is PaperKind.SOLUTION:
        if paper.score is None:
            violations.append(Violation("MissingScore", "solution papers carry a score"))
        elif not 0.0 <= paper.score <= 1.0:
            violations.append(Violation("ScoreOutOfRange", f"score {paper.score!r} not in [0, 1]"))
    elif paper.score is not None:
        violations.append(Violation("ScoreOnArgument", "argument papers never carry a score"))
    return violations


def _req_str(doc: Mapping[str, Any], key: str) -> str:
    value = doc[key]
    if not isinstance(value, str):
        raise TypeError(f"{key} must be a string")
    return value


def _req_int(doc: Mapping[str, Any], key: str) -> int:
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{key} must be an integer")
    return value


def _req_bool(doc: Mapping[str, Any], key: str) -> bool:
    value = doc[key]
    if not isinstance(value, bool):
        raise TypeError(f"{key} must be a boolean")
    return value


def _opt_number(doc: Mapping[str, Any], key: str) -> float | None:
    value = doc.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"{key} must be a number")
    return float(value)


def _req_str_list(doc: Mapping[str, Any], key: str) -> list[str]:
    value = doc[key]
    if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
        raise TypeError(f"{key} must be a list of strings")
    return value
