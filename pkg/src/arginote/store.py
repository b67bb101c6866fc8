"""Durable session logs with ordered fan-out to live subscribers.

One JSONL file per session. All writes for a session happen inside a single
critical section: validate, append (flushed to disk), then publish to every
subscriber — so no client ever observes an event that could vanish on
crash-recovery, and every subscriber sees the same gap-free order.
"""

from __future__ import annotations

import os
import queue
import re
import threading
import time
from pathlib import Path
from typing import Callable, Iterable

from .engine import (
    Command,
    CommandRejected,
    CreateSession,
    CreateTeam,
    Event,
    JoinTeam,
    SessionState,
    StorageFailureError,
    SubmitPaper,
    TeamCreated,
    apply_command,
    initial_state,
    parse_log_bytes,
    replay,
)
from .evaluator import Challenge, EvaluatorRegistry, default_registry
from .model import Limits, Violation

_SESSION_ID_RE = re.compile(r"^s(\d+)$")

Clock = Callable[[], int]


def wall_clock_ms() -> int:
    return int(time.time() * 1000)


class Subscription:
    """One subscriber's ordered delivery queue.

    Events are enqueued under the session lock; a bounded queue protects the
    session from slow consumers (they get closed, never block the writers).
    """

    def __init__(self, max_pending: int = 1024):
        self._queue: queue.Queue[Event | None] = queue.Queue(maxsize=max_pending)
        self.closed = False
        self.close_reason: str | None = None

    def get(self, timeout: float) -> Event | None:
        """Next event, or None on timeout (caller sends a heartbeat)."""
        try:
            item = self._queue.get(timeout=timeout)
        except queue.Empty:
            if self.closed:
                raise SubscriptionClosed(self.close_reason or "closed") from None
            return None
        if item is None:
            raise SubscriptionClosed(self.close_reason or "closed")
        return item

    def _offer(self, event: Event) -> bool:
        try:
            self._queue.put_nowait(event)
        except queue.Full:
            return False
        return True

    def _close(self, reason: str) -> None:
        self.closed = True
        self.close_reason = reason
        try:
            self._queue.put_nowait(None)
        except queue.Full:
            pass  # a pending get() will still drain to the sentinel eventually


class SubscriptionClosed(Exception):
    pass


class SessionHandle:
    """Owner of one session's log file, state, and subscriber list."""

    def __init__(
        self,
        session_id: str,
        path: Path,
        state: SessionState,
        events: list[Event],
        *,
        registry: EvaluatorRegistry,
        clock: Clock,
        limits: Limits,
        max_pending: int = 1024,
    ):
        self.id = session_id
        self.path = path
        self._state = state
        self._events = events
        self._registry = registry
        self._clock = clock
        self._limits = limits
        self._max_pending = max_pending
        self._lock = threading.Lock()
        self._subscribers: list[Subscription] = []

    @property
    def state(self) -> SessionState:
        """Latest immutable state; safe to read without the lock."""
        return self._state

    def events_snapshot(self) -> list[Event]:
        with self._lock:
            return list(self._events)

    def execute(self, cmd: Command) -> list[Event]:
        """Apply one command: validate, persist, publish. All-or-nothing."""
        with self._lock:
            new_state, events = apply_command(
                self._state,
                cmd,
                self._clock(),
                registry=self._registry,
                session_id=self.id,
                limits=self._limits,
            )
            self._append(events)
            self._state = new_state
            self._events.extend(events)
            self._publish(events)
        return events

    def subscribe(self, from_seq: int = 0) -> tuple[list[Event], Subscription]:
        """Backfill after `from_seq` plus a live queue, with no gap between them."""
        with self._lock:
            backfill = [e for e in self._events if e.seq > from_seq]
            sub = Subscription(max_pending=self._max_pending)
            self._subscribers.append(sub)
            return backfill, sub

    def unsubscribe(self, sub: Subscription) -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)

    def export_bytes(self) -> bytes:
        with self._lock:
            try:
                return self.path.read_bytes()
            except OSError as exc:
                raise StorageFailureError(str(exc)) from exc

    def _append(self, events: Iterable[Event]) -> None:
        block = "".join(event.to_line() + "\n" for event in events).encode("utf-8")
        try:
            with open(self.path, "ab") as fh:
                before = fh.tell()
                try:
                    fh.write(block)
                    fh.flush()
                    os.fsync(fh.fileno())
                except OSError:
                    fh.truncate(before)  # keep the log free of partial appends
                    raise
        except OSError as exc:
            raise StorageFailureError(str(exc)) from exc

    def _publish(self, events: list[Event]) -> None:
        dead: list[Subscription] = []
        for sub in self._subscribers:
            for event in events:
                if not sub._offer(event):
                    sub._close("slow_consumer")
                    dead.append(sub)
                    break
        for sub in dead:
            self._subscribers.remove(sub)


class SessionStore:
    """All sessions under one data directory, plus the challenge catalog."""

    def __init__(
        self,
        data_dir: str | Path,
        *,
        challenges: Iterable[Challenge] = (),
        registry: EvaluatorRegistry | None = None,
        clock: Clock = wall_clock_ms,
        limits: Limits = Limits(),
        max_pending: int = 1024,
    ):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.registry = registry or default_registry()
        self.clock = clock
        self.limits = limits
        self._max_pending = max_pending
        self.challenges = {ch.id: ch for ch in challenges}
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionHandle] = {}
        self._team_sessions: dict[str, str] = {}
        self._next_session = 1
        self._load()

    def _load(self) -> None:
        for path in sorted(self.data_dir.glob("*.jsonl")):
            session_id = path.stem
            events = parse_log_bytes(path.read_bytes())
            state = replay(events, self.limits)
            handle = SessionHandle(
                session_id,
                path,
                state,
                list(events),
                registry=self.registry,
                clock=self.clock,
                limits=self.limits,
                max_pending=self._max_pending,
            )
            self._sessions[session_id] = handle
            for team_id in state.teams:
                self._team_sessions[team_id] = session_id
            match = _SESSION_ID_RE.match(session_id)
            if match:
                self._next_session = max(self._next_session, int(match.group(1)) + 1)

    def create_session(self, challenge_id: str) -> tuple[SessionHandle, list[Event]]:
        challenge = self.challenges.get(challenge_id)
        if challenge is None:
            raise CommandRejected(
                [Violation("UnknownChallenge", f"no challenge {challenge_id!r} loaded")]
            )
        with self._lock:
            session_id = f"s{self._next_session}"
            self._next_session += 1
        handle = SessionHandle(
            session_id,
            self.data_dir / f"{session_id}.jsonl",
            initial_state(),
            [],
            registry=self.registry,
            clock=self.clock,
            limits=self.limits,
            max_pending=self._max_pending,
        )
        try:
            events = handle.execute(CreateSession(challenge))
        except StorageFailureError:
            handle.path.unlink(missing_ok=True)
            raise
        with self._lock:
            self._sessions[session_id] = handle
        return handle, events

    def execute(self, cmd: Command) -> tuple[SessionHandle, list[Event]]:
        """Route a command to its session and apply it."""
        if isinstance(cmd, CreateSession):
            raise ValueError("use create_session for session creation")
        if isinstance(cmd, CreateTeam):
            handle = self.session(cmd.session)
        elif isinstance(cmd, (JoinTeam, SubmitPaper)):
            handle = self.session_for_team(cmd.team)
        else:
            raise TypeError(f"unknown command: {cmd!r}")
        events = handle.execute(cmd)
        for event in events:
            if isinstance(event.body, TeamCreated):
                with self._lock:
                    self._team_sessions[event.body.team] = handle.id
        return handle, events

    def session(self, session_id: str) -> SessionHandle:
        handle = self._sessions.get(session_id)
        if handle is None:
            raise CommandRejected([Violation("UnknownSession", f"no session {session_id!r}")])
        return handle

    def session_for_team(self, team_id: str) -> SessionHandle:
        session_id = self._team_sessions.get(team_id)
        if session_id is None:
            raise CommandRejected([Violation("UnknownTeam", f"no team {team_id!r}")])
        return self._sessions[session_id]

    def session_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._sessions)
