"""Log-derived measurements: trajectories, running best, summaries, rank correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

from .engine import Event, SessionState, replay
from .model import PaperKind


class UnknownTeamError(KeyError):
    pass


class TooFewPairsError(ValueError):
    pass


class ZeroVarianceError(ValueError):
    """All x or all y values tied; rank correlation is undefined."""


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    paper: str
    score: float


@dataclass(frozen=True)
class TeamSummary:
    team: str
    citation_count: int
    best_score: float | None
    final_paper: str | None

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"team": self.team, "citation_count": self.citation_count}
        if self.best_score is not None:
            doc["best_score"] = self.best_score
        if self.final_paper is not None:
            doc["final_paper"] = self.final_paper
        return doc


@dataclass(frozen=True)
class FigurePoint:
    paper: str
    t: float
    score: float
    is_cited: bool
    is_citing: bool
    is_final_analysis: bool
    score_synthetic: bool

    def to_doc(self) -> dict[str, Any]:
        return {
            "paper": self.paper,
            "t": self.t,
            "score": self.score,
            "is_cited": self.is_cited,
            "is_citing": self.is_citing,
            "is_final_analysis": self.is_final_analysis,
            "score_synthetic": self.score_synthetic,
        }


def _state_of(events: Sequence[Event] | SessionState) -> SessionState:
    if isinstance(events, SessionState):
        return events
    return replay(events)


def _team(state: SessionState, team_id: str):
    team = state.teams.get(team_id)
    if team is None:
        raise UnknownTeamError(team_id)
    return team


def _elapsed_seconds(state: SessionState, at: int) -> float:
    assert state.created_at is not None
    return (at - state.created_at) / 1000.0


def score_trajectory(events: Sequence[Event] | SessionState, team_id: str) -> list[TrajectoryPoint]:
    """One point per solution paper, in submission order, t in seconds."""
    state = _state_of(events)
    team = _team(state, team_id)
    return [
        TrajectoryPoint(t=_elapsed_seconds(state, p.submitted_at), paper=p.id, score=p.score)
        for p in team.papers
        if p.kind is PaperKind.SOLUTION and p.score is not None
    ]


def running_best(points: Sequence[TrajectoryPoint]) -> list[tuple[float, float]]:
    """Prefix maximum of the scores, keeping the original times."""
    out: list[tuple[float, float]] = []
    best = -math.inf
    for point in points:
        best = max(best, point.score)
        out.append((point.t, best))
    return out


def min_score_after(points: Sequence[TrajectoryPoint], t0: float) -> float | None:
    """Lowest raw score strictly after t0, or None if nothing follows."""
    later = [p.score for p in points if p.t > t0]
    return min(later) if later else None


def team_summaries(events: Sequence[Event] | SessionState) -> list[TeamSummary]:
    """Per team: citation edges, best solution score, final analysis paper."""
    state = _state_of(events)
    summaries: list[TeamSummary] = []
    for team in state.teams.values():
        scores = [p.score for p in team.papers if p.score is not None]
        summaries.append(
            TeamSummary(
                team=team.id,
                citation_count=team.graph.edge_count(),
                best_score=max(scores) if scores else None,
                final_paper=team.final_paper,
            )
        )
    return summaries


def spearman_rho(pairs: Sequence[tuple[float, float]]) -> float:
    """Spearman rank correlation with tie-averaged (fractional) ranks."""
    if len(pairs) < 2:
        raise TooFewPairsError(f"need at least 2 pairs, got {len(pairs)}")
    xs = _fractional_ranks([p[0] for p in pairs])
    ys = _fractional_ranks([p[1] for p in pairs])
    n = len(pairs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = sum(d * d for d in dx)
    var_y = sum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise ZeroVarianceError("rank correlation undefined when one variable is all ties")
    cov = sum(a * b for a, b in zip(dx, dy))
    return cov / math.sqrt(var_x * var_y)


def _fractional_ranks(values: Sequence[float]) -> list[float]:
    """Ranks from 1; runs of equal values share their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    start = 0
    while start < len(order):
        stop = start
        while stop + 1 < len(order) and values[order[stop + 1]] == values[order[start]]:
            stop += 1
        rank = (start + stop + 2) / 2  # average of one-based positions start+1..stop+1
        for index in order[start : stop + 1]:
            ranks[index] = rank
        start = stop + 1
    return ranks


def figure_points(events: Sequence[Event] | SessionState, team_id: str) -> list[FigurePoint]:
    """One plottable point per paper, flagged with its citation activity.

    Argument papers have no score of their own; they are plotted at the
    team's running best at that moment and marked synthetic.
    """
    state = _state_of(events)
    team = _team(state, team_id)
    points: list[FigurePoint] = []
    best = 0.0
    for paper in team.papers:
        if paper.score is not None:
            best = max(best, paper.score)
            score, synthetic = paper.score, False
        else:
            score, synthetic = best, True
        points.append(
            FigurePoint(
                paper=paper.id,
                t=_elapsed_seconds(state, paper.submitted_at),
                score=score,
                is_cited=bool(team.graph.cited_by(paper.id)),
                is_citing=bool(team.graph.cites(paper.id)),
                is_final_analysis=paper.is_final,
                score_synthetic=synthetic,
            )
        )
    return points


def figure_csv(points: Sequence[FigurePoint]) -> str:
    lines = ["t,score,is_cited,is_citing,is_final"]
    for p in points:
        lines.append(
            f"{p.t!r},{p.score!r},"
            f"{str(p.is_cited).lower()},{str(p.is_citing).lower()},"
            f"{str(p.is_final_analysis).lower()}"
        )
    return "\n".join(lines) + "\n"


def analytics_doc(events: Sequence[Event] | SessionState) -> dict[str, Any]:
    """The full analytics export for one session."""
    state = _state_of(events)
    summaries = team_summaries(state)
    pairs = [(float(s.citation_count), s.best_score) for s in summaries if s.best_score is not None]
    try:
        rho: float | None = spearman_rho(pairs) if len(pairs) >= 2 else None
    except ZeroVarianceError:
        rho = None
    return {
        "teams": [s.to_doc() for s in summaries],
        "trajectories": {
            team_id: [{"t": p.t, "paper": p.paper, "score": p.score} for p in trajectory]
            for team_id, trajectory in (
                (tid, score_trajectory(state, tid)) for tid in state.teams
            )
        },
        "figure": {
            team_id: [p.to_doc() for p in figure_points(state, team_id)]
            for team_id in state.teams
        },
        "spearman": rho,
    }
