"""Event-sourced collaborative workspace: scored mini-papers, citations, live streams."""

from .analytics import (
    FigurePoint,
    TeamSummary,
    TrajectoryPoint,
    analytics_doc,
    figure_points,
    min_score_after,
    running_best,
    score_trajectory,
    spearman_rho,
    team_summaries,
)
from .canonical import NonFiniteNumberError, canonical_bytes, canonical_text, digest_document
from .engine import (
    Command,
    CommandRejected,
    CorruptLogError,
    CreateSession,
    CreateTeam,
    Event,
    JoinTeam,
    SessionState,
    StorageFailureError,
    SubmitPaper,
    apply_command,
    apply_event,
    initial_state,
    parse_log_bytes,
    replay,
    replay_log_bytes,
    state_digest,
    team_workspace_doc,
    workspace_digest,
)
from .evaluator import (
    Challenge,
    EvaluatorRegistry,
    default_registry,
    gaussian_proximity,
    load_challenge,
)
from .graph import CitationGraph, empty_graph
from .model import (
    DraftInvalid,
    Limits,
    MiniPaper,
    PaperDraft,
    PaperKind,
    ValidatedDraft,
    Violation,
    WorkspaceView,
    draft_violations,
    validate_draft,
)
from .server import create_app
from .store import SessionStore

__all__ = [
    "Challenge",
    "CitationGraph",
    "Command",
    "CommandRejected",
    "CorruptLogError",
    "CreateSession",
    "CreateTeam",
    "DraftInvalid",
    "Event",
    "EvaluatorRegistry",
    "FigurePoint",
    "JoinTeam",
    "Limits",
    "MiniPaper",
    "NonFiniteNumberError",
    "PaperDraft",
    "PaperKind",
    "SessionState",
    "SessionStore",
    "StorageFailureError",
    "SubmitPaper",
    "TeamSummary",
    "TrajectoryPoint",
    "ValidatedDraft",
    "Violation",
    "WorkspaceView",
    "analytics_doc",
    "apply_command",
    "apply_event",
    "canonical_bytes",
    "canonical_text",
    "create_app",
    "default_registry",
    "digest_document",
    "draft_violations",
    "empty_graph",
    "figure_points",
    "gaussian_proximity",
    "initial_state",
    "load_challenge",
    "min_score_after",
    "parse_log_bytes",
    "replay",
    "replay_log_bytes",
    "running_best",
    "score_trajectory",
    "spearman_rho",
    "state_digest",
    "team_summaries",
    "team_workspace_doc",
    "validate_draft",
    "workspace_digest",
]
