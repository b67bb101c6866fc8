from __future__ import annotations

import threading
from pathlib import Path

import pytest

from arginote.engine import (
    CommandRejected,
    CreateTeam,
    JoinTeam,
    StorageFailureError,
    SubmitPaper,
    parse_log_bytes,
    replay,
    state_digest,
)
from arginote.store import SessionStore, SubscriptionClosed

from support import ORIGIN_2D, solution_draft


class TickingClock:
    def __init__(self, start: int = 1_000_000, step: int = 250):
        self.now = start
        self.step = step
        self._lock = threading.Lock()

    def __call__(self) -> int:
        with self._lock:
            self.now += self.step
            return self.now


def make_store(tmp_path: Path, **kwargs) -> SessionStore:
    return SessionStore(
        tmp_path / "data",
        challenges=[ORIGIN_2D],
        clock=TickingClock(),
        **kwargs,
    )


def seed_team(store: SessionStore) -> tuple[str, str, str]:
    handle, _ = store.create_session(ORIGIN_2D.id)
    _, events = store.execute(CreateTeam(session=handle.id, name="Team 1"))
    team = events[0].body.team
    _, events = store.execute(JoinTeam(team=team, display_name="Ada"))
    return handle.id, team, events[0].body.member


def test_create_session_requires_loaded_challenge(tmp_path):
    store = make_store(tmp_path)
    with pytest.raises(CommandRejected) as excinfo:
        store.create_session("missing")
    assert excinfo.value.codes == ("UnknownChallenge",)


def test_events_are_durable_before_delivery(tmp_path):
    store = make_store(tmp_path)
    session_id, team, member = seed_team(store)
    handle = store.session(session_id)
    _, sub = handle.subscribe(from_seq=handle.state.last_seq)

    store.execute(SubmitPaper(team=team, author=member, draft=solution_draft()))
    event = sub.get(timeout=1.0)
    assert event is not None
    on_disk = parse_log_bytes(handle.path.read_bytes())
    assert event.seq <= on_disk[-1].seq  # delivered only after the flush


def test_append_with_no_subscribers_succeeds(tmp_path):
    store = make_store(tmp_path)
    _, team, member = seed_team(store)
    _, events = store.execute(SubmitPaper(team=team, author=member, draft=solution_draft()))
    assert events[0].body.paper.id


def test_subscriber_sees_submissions_in_seq_order(tmp_path):
    store = make_store(tmp_path)
    session_id, team, member = seed_team(store)
    handle = store.session(session_id)
    _, sub = handle.subscribe(from_seq=handle.state.last_seq)

    for index in range(3):
        store.execute(
            SubmitPaper(team=team, author=member, draft=solution_draft(title=f"p{index}"))
        )
    seqs = [sub.get(timeout=1.0).seq for _ in range(3)]
    assert seqs == sorted(seqs)
    assert seqs == list(range(seqs[0], seqs[0] + 3))


def test_backfill_plus_live_has_no_gap_or_duplicate(tmp_path):
    store = make_store(tmp_path)
    session_id, team, member = seed_team(store)
    handle = store.session(session_id)

    store.execute(SubmitPaper(team=team, author=member, draft=solution_draft("early")))
    backfill, sub = handle.subscribe(from_seq=0)
    store.execute(SubmitPaper(team=team, author=member, draft=solution_draft("late")))

    received = [e.seq for e in backfill]
    received.append(sub.get(timeout=1.0).seq)
    assert received == list(range(1, len(received) + 1))


def test_backfill_respects_from_seq(tmp_path):
    store = make_store(tmp_path)
    session_id, _, _ = seed_team(store)
    handle = store.session(session_id)
    backfill, _ = handle.subscribe(from_seq=2)
    assert [e.seq for e in backfill] == [3]


def test_slow_consumer_is_closed_not_blocking(tmp_path):
    store = make_store(tmp_path, max_pending=2)
    session_id, team, member = seed_team(store)
    handle = store.session(session_id)
    _, sub = handle.subscribe(from_seq=handle.state.last_seq)

    for index in range(4):  # never drained; overflows the bounded queue
        store.execute(
            SubmitPaper(team=team, author=member, draft=solution_draft(title=f"p{index}"))
        )
    drained = 0
    with pytest.raises(SubscriptionClosed):
        while True:
            assert sub.get(timeout=0.1) is not None
            drained += 1
            assert drained < 10
    assert drained <= 2
    assert sub.close_reason == "slow_consumer"


def test_restart_reloads_state_and_routing(tmp_path):
    store = make_store(tmp_path)
    session_id, team, member = seed_team(store)
    store.execute(SubmitPaper(team=team, author=member, draft=solution_draft()))
    digest = state_digest(store.session(session_id).state)

    reloaded = make_store(tmp_path)
    assert state_digest(reloaded.session(session_id).state) == digest
    assert reloaded.session_for_team(team).id == session_id

    handle, _ = reloaded.create_session(ORIGIN_2D.id)
    assert handle.id != session_id  # ids never reused across restarts


def test_export_is_byte_faithful(tmp_path):
    store = make_store(tmp_path)
    session_id, team, member = seed_team(store)
    store.execute(SubmitPaper(team=team, author=member, draft=solution_draft()))
    handle = store.session(session_id)
    assert handle.export_bytes() == handle.path.read_bytes()
    assert state_digest(replay(parse_log_bytes(handle.export_bytes()))) == state_digest(
        handle.state
    )


def test_storage_failure_reports_and_preserves_state(tmp_path):
    store = make_store(tmp_path)
    session_id, team, member = seed_team(store)
    handle = store.session(session_id)
    digest = state_digest(handle.state)
    events_before = len(handle.events_snapshot())

    handle.path = tmp_path / "missing-dir" / "log.jsonl"
    with pytest.raises(StorageFailureError):
        store.execute(SubmitPaper(team=team, author=member, draft=solution_draft()))
    assert state_digest(handle.state) == digest
    assert len(handle.events_snapshot()) == events_before


def test_concurrent_submissions_serialize_without_gaps(tmp_path):
    store = make_store(tmp_path)
    session_id, team, member = seed_team(store)
    handle = store.session(session_id)
    start = handle.state.last_seq

    def submit(index: int) -> None:
        store.execute(
            SubmitPaper(team=team, author=member, draft=solution_draft(title=f"w{index}"))
        )

    threads = [threading.Thread(target=submit, args=(i,)) for i in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    events = handle.events_snapshot()
    assert [e.seq for e in events] == list(range(1, start + 17))
    assert state_digest(replay(parse_log_bytes(handle.path.read_bytes()))) == state_digest(
        handle.state
    )


def test_routing_rejects_unknown_ids(tmp_path):
    store = make_store(tmp_path)
    with pytest.raises(CommandRejected) as excinfo:
        store.execute(JoinTeam(team="t404", display_name="x"))
    assert excinfo.value.codes == ("UnknownTeam",)
    with pytest.raises(CommandRejected) as excinfo:
        store.execute(CreateTeam(session="s404", name="x"))
    assert excinfo.value.codes == ("UnknownSession",)
