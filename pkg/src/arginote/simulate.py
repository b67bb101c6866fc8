"""Scripted multi-team sessions for demos and determinism tests.

A script describes a challenge plus per-team members and papers (explicit or
randomly generated); the runner drives everything through the normal command
path with a deterministic clock, so the same script and seed always produce
a byte-identical event log.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .engine import (
    CreateSession,
    CreateTeam,
    Event,
    JoinTeam,
    SessionState,
    SubmitPaper,
    apply_command,
    initial_state,
)
from .evaluator import Challenge, EvaluatorRegistry, default_registry, gaussian_proximity
from .model import PaperDraft, PaperKind

DEFAULT_START_AT = 1_704_067_200_000  # 2024-01-01T00:00:00Z
DEFAULT_STEP_MS = (2_000, 15_000)


@dataclass
class _PaperSpec:
    kind: PaperKind
    title: str
    author_index: int
    argument: str = ""
    payload: Any | None = None
    cites: tuple[int, ...] = ()
    is_final: bool = False


@dataclass
class _TeamScript:
    name: str
    member_names: list[str]
    papers: list[_PaperSpec]


class ScriptError(ValueError):
    pass


def params_for_score(score: float, challenge: Challenge) -> list[float]:
    """A solution vector whose evaluated score is (bit-for-bit, if possible)
    the requested value: offset the first coordinate by sqrt(-ln(score)) and
    nudge by ulps until the scorer reproduces the target float exactly."""
    if not 0.0 < score <= 1.0:
        raise ScriptError(f"score {score!r} must be in (0, 1]")
    params = challenge.params
    target = [float(x) for x in params["target"]]
    if score == 1.0:
        return list(target)
    base = math.sqrt(-math.log(score))
    best_vector: list[float] | None = None
    best_error = math.inf

    def attempt(offset: float) -> list[float] | None:
        nonlocal best_vector, best_error
        vector = [target[0] + offset] + target[1:]
        got = gaussian_proximity(params, {"params": vector})
        if got == score:
            return vector
        if abs(got - score) < best_error:
            best_error, best_vector = abs(got - score), vector
        return None

    # Walk outward in ulps around the analytic offset until the rounded
    # arithmetic lands exactly on the requested float.
    exact = attempt(base)
    hi = lo = base
    for _ in range(3000):
        if exact is not None:
            return exact
        hi = math.nextafter(hi, math.inf)
        exact = attempt(hi)
        if exact is not None:
            return exact
        lo = math.nextafter(lo, -math.inf)
        exact = attempt(lo)
    if exact is not None:
        return exact
    assert best_vector is not None
    return best_vector


def _parse_team(doc: Mapping[str, Any], rng: random.Random, challenge: Challenge) -> _TeamScript:
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise ScriptError("each team needs a non-empty name")
    members = doc.get("members", 2)
    if isinstance(members, int):
        member_names = [f"{name} member {i + 1}" for i in range(members)]
    elif isinstance(members, list) and all(isinstance(m, str) for m in members):
        member_names = list(members)
    else:
        raise ScriptError(f"team {name}: members must be a count or a list of names")
    if not member_names:
        raise ScriptError(f"team {name}: needs at least one member")

    if "random" in doc:
        papers = _random_papers(doc["random"], name, len(member_names), rng, challenge)
    else:
        papers = [
            _parse_paper(spec, index, name, len(member_names), challenge)
            for index, spec in enumerate(doc.get("papers", []))
        ]
    return _TeamScript(name=name, member_names=member_names, papers=papers)


def _parse_paper(
    doc: Mapping[str, Any], index: int, team: str, n_members: int, challenge: Challenge
) -> _PaperSpec:
    if not isinstance(doc, Mapping):
        raise ScriptError(f"team {team}: paper {index} must be an object")
    kind = PaperKind(doc.get("kind", "solution"))
    author = doc.get("author", index % n_members)
    cites = tuple(doc.get("cites", ()))
    if any(not isinstance(c, int) or c < 0 or c >= index for c in cites):
        raise ScriptError(f"team {team}: paper {index} cites must index earlier papers")
    payload: Any | None = None
    if kind is PaperKind.SOLUTION:
        if "params" in doc:
            payload = {"params": list(doc["params"])}
        elif "score" in doc:
            payload = {"params": params_for_score(float(doc["score"]), challenge)}
        else:
            raise ScriptError(f"team {team}: solution paper {index} needs params or score")
    elif "payload" in doc:
        payload = doc["payload"]
    title = doc.get("title", f"{team} note {index + 1}")
    return _PaperSpec(
        kind=kind,
        title=title,
        author_index=int(author),
        argument=doc.get("argument", ""),
        payload=payload,
        cites=cites,
        is_final=bool(doc.get("final", False)),
    )


def _random_papers(
    doc: Mapping[str, Any],
    team: str,
    n_members: int,
    rng: random.Random,
    challenge: Challenge,
) -> list[_PaperSpec]:
    if not isinstance(doc, Mapping):
        raise ScriptError(f"team {team}: random block must be an object")
    count = int(doc.get("papers", 8))
    max_cites = int(doc.get("max_cites", 3))
    argument_share = float(doc.get("argument_share", 0.2))
    want_final = bool(doc.get("final", True))
    target = [float(x) for x in challenge.params["target"]]

    papers: list[_PaperSpec] = []
    for index in range(count):
        cites = tuple(
            sorted(rng.sample(range(index), k=rng.randint(0, min(max_cites, index))))
        )
        author = rng.randrange(n_members)
        if index > 0 and rng.random() < argument_share:
            papers.append(
                _PaperSpec(
                    kind=PaperKind.ARGUMENT,
                    title=f"{team} synthesis {index + 1}",
                    author_index=author,
                    argument=f"builds on {len(cites)} earlier results",
                    cites=cites,
                    is_final=False,
                )
            )
        else:
            vector = [t + rng.uniform(-1.5, 1.5) for t in target]
            papers.append(
                _PaperSpec(
                    kind=PaperKind.SOLUTION,
                    title=f"{team} probe {index + 1}",
                    author_index=author,
                    payload={"params": vector},
                    cites=cites,
                    is_final=False,
                )
            )
    if want_final:
        cites = tuple(
            sorted(rng.sample(range(count), k=min(2, count))) if count else ()
        )
        papers.append(
            _PaperSpec(
                kind=PaperKind.ARGUMENT,
                title=f"{team} joint analysis",
                author_index=rng.randrange(n_members),
                argument="closing synthesis of the team's best results",
                cites=cites,
                is_final=True,
            )
        )
    return papers


def run_script(
    script: Mapping[str, Any],
    seed: int,
    *,
    registry: EvaluatorRegistry | None = None,
    session_id: str = "s1",
) -> tuple[SessionState, list[Event]]:
    """Run a scripted session, returning the final state and full event log."""
    if not isinstance(script, Mapping):
        raise ScriptError("script must be a JSON object")
    try:
        challenge = Challenge.from_doc(script["challenge"])
    except (KeyError, ValueError) as exc:
        raise ScriptError(f"script challenge: {exc}") from exc
    rng = random.Random(seed)
    registry = registry or default_registry()

    team_docs = script.get("teams")
    if not isinstance(team_docs, list) or not team_docs:
        raise ScriptError("script needs a non-empty teams array")
    teams = [_parse_team(doc, rng, challenge) for doc in team_docs]

    start_at = int(script.get("start_at", DEFAULT_START_AT))
    step = script.get("step_ms", list(DEFAULT_STEP_MS))
    step_min, step_max = int(step[0]), int(step[1])

    clock = start_at
    state = initial_state()
    log: list[Event] = []

    def run(cmd: Any) -> list[Event]:
        nonlocal state, clock
        clock += rng.randint(step_min, step_max)
        state, events = apply_command(
            state, cmd, clock, registry=registry, session_id=session_id
        )
        log.extend(events)
        return events

    run(CreateSession(challenge))
    team_ids: list[str] = []
    member_ids: list[list[str]] = []
    for team in teams:
        events = run(CreateTeam(session=session_id, name=team.name))
        team_ids.append(events[0].body.team)
        ids: list[str] = []
        for member_name in team.member_names:
            events = run(JoinTeam(team=team_ids[-1], display_name=member_name))
            ids.append(events[0].body.member)
        member_ids.append(ids)

    # Interleave one paper per team per round, mirroring concurrent teams.
    submitted: list[list[str]] = [[] for _ in teams]
    cursor = [0] * len(teams)
    while any(cursor[i] < len(team.papers) for i, team in enumerate(teams)):
        for i, team in enumerate(teams):
            if cursor[i] >= len(team.papers):
                continue
            spec = team.papers[cursor[i]]
            cursor[i] += 1
            draft = PaperDraft(
                title=spec.title,
                kind=spec.kind,
                argument=spec.argument,
                payload=spec.payload,
                citations=tuple(submitted[i][c] for c in spec.cites),
                is_final=spec.is_final,
            )
            events = run(
                SubmitPaper(
                    team=team_ids[i],
                    author=member_ids[i][spec.author_index % len(member_ids[i])],
                    draft=draft,
                )
            )
            submitted[i].append(events[0].body.paper.id)

    return state, log


def load_script(path: str | Path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_log(events: Sequence[Event], path: str | Path) -> None:
    data = "".join(event.to_line() + "\n" for event in events)
    Path(path).write_bytes(data.encode("utf-8"))
