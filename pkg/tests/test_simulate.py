from __future__ import annotations

import pytest

from arginote.engine import replay, state_digest
from arginote.evaluator import gaussian_proximity
from arginote.simulate import ScriptError, params_for_score, run_script, write_log

from support import ORIGIN_2D


def test_same_seed_is_byte_identical(four_team_script, tmp_path):
    _, events_a = run_script(four_team_script, seed=7)
    _, events_b = run_script(four_team_script, seed=7)
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_log(events_a, a)
    write_log(events_b, b)
    assert a.read_bytes() == b.read_bytes()


def test_different_seeds_differ(four_team_script):
    _, events_a = run_script(four_team_script, seed=1)
    _, events_b = run_script(four_team_script, seed=2)
    assert [e.to_line() for e in events_a] != [e.to_line() for e in events_b]


def test_script_runs_through_command_path(four_team_run):
    state, events = four_team_run
    assert state_digest(replay(events)) == state_digest(state)
    assert [e.seq for e in events] == list(range(1, len(events) + 1))


def test_random_team_block_generates_valid_log():
    script = {
        "challenge": ORIGIN_2D.to_doc(),
        "teams": [
            {"name": "A", "members": 3, "random": {"papers": 12, "max_cites": 3}},
            {"name": "B", "members": 2, "random": {"papers": 8, "final": True}},
        ],
    }
    state, events = run_script(script, seed=3)
    assert state_digest(replay(events)) == state_digest(state)
    assert len(state.teams) == 2
    team_b = list(state.teams.values())[1]
    assert team_b.final_paper is not None


def test_script_errors():
    with pytest.raises(ScriptError):
        run_script({"teams": []}, seed=0)
    with pytest.raises(ScriptError):
        run_script({"challenge": ORIGIN_2D.to_doc(), "teams": []}, seed=0)
    bad_cites = {
        "challenge": ORIGIN_2D.to_doc(),
        "teams": [
            {
                "name": "A",
                "members": 1,
                "papers": [{"kind": "solution", "score": 0.5, "cites": [0]}],
            }
        ],
    }
    with pytest.raises(ScriptError):
        run_script(bad_cites, seed=0)
    no_params = {
        "challenge": ORIGIN_2D.to_doc(),
        "teams": [{"name": "A", "members": 1, "papers": [{"kind": "solution"}]}],
    }
    with pytest.raises(ScriptError):
        run_script(no_params, seed=0)


@pytest.mark.parametrize("target", [0.991, 0.88, 0.785, 0.72, 0.4, 0.05])
def test_params_for_score_hits_requested_float(target):
    vector = params_for_score(target, ORIGIN_2D)
    got = gaussian_proximity(ORIGIN_2D.params, {"params": vector})
    assert got == pytest.approx(target, abs=1e-12)


def test_params_for_perfect_score():
    vector = params_for_score(1.0, ORIGIN_2D)
    assert gaussian_proximity(ORIGIN_2D.params, {"params": vector}) == 1.0


def test_params_for_score_rejects_out_of_range():
    with pytest.raises(ScriptError):
        params_for_score(0.0, ORIGIN_2D)
    with pytest.raises(ScriptError):
        params_for_score(1.5, ORIGIN_2D)
