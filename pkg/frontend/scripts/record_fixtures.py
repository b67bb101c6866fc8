"""Regenerate the recorded stream/workspace fixtures used by the UI tests.

Run from the repository root (the arginote package must be installed):

    python frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from arginote.canonical import canonical_text
from arginote.engine import team_workspace_doc
from arginote.simulate import run_script

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"

SCRIPT = {
    "challenge": {
        "id": "origin-2d",
        "kind": "gaussian-proximity",
        "params": {"dimension": 2, "target": [0.0, 0.0]},
    },
    "start_at": 1_704_067_200_000,
    "step_ms": [4000, 9000],
    "teams": [
        {
            "name": "Team A",
            "members": ["Ada", "Bjorn"],
            "papers": [
                {"title": "first sweep", "kind": "solution", "score": 0.5},
                {"title": "deeper well", "kind": "solution", "score": 0.72, "cites": [0]},
                {"title": "side quest", "kind": "solution", "score": 0.44},
                {"title": "well refined", "kind": "solution", "score": 0.81, "cites": [1]},
                {"title": "ramp test", "kind": "solution", "score": 0.66, "cites": [2]},
                {"title": "combined", "kind": "solution", "score": 0.9, "cites": [1, 3]},
                {
                    "title": "midpoint notes",
                    "kind": "argument",
                    "argument": "Depth beats width so far.",
                    "cites": [3],
                },
                {
                    "title": "joint analysis",
                    "kind": "argument",
                    "argument": "The refined well carried every later gain.",
                    "cites": [5],
                    "final": True,
                },
            ],
        },
        {
            "name": "Team B",
            "members": ["Chloe"],
            "papers": [
                {"title": "b one", "kind": "solution", "score": 0.3},
                {"title": "b two", "kind": "solution", "score": 0.55, "cites": [0]},
                {"title": "b three", "kind": "solution", "score": 0.6},
                {"title": "b four", "kind": "solution", "score": 0.62, "cites": [1]},
                {"title": "b five", "kind": "solution", "score": 0.7, "cites": [3]},
                {"title": "b notes", "kind": "argument", "argument": "steady", "final": True},
            ],
        },
    ],
}


def main() -> None:
    state, events = run_script(SCRIPT, seed=2024)
    assert len(events) == 20, f"fixture drifted: {len(events)} events"
    team_id = next(iter(state.teams))  # Team A

    stream = [
        json.loads(canonical_text({"type": "event", **event.to_doc()}))
        for event in events
    ]
    workspace = json.loads(canonical_text(team_workspace_doc(state, team_id)))

    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "stream.json").write_text(json.dumps(stream, indent=1) + "\n")
    (FIXTURES / "workspace.json").write_text(json.dumps(workspace, indent=1) + "\n")
    (FIXTURES / "meta.json").write_text(
        json.dumps({"team": team_id, "events": len(events)}, indent=1) + "\n"
    )
    print(f"recorded {len(events)} events for {team_id} into {FIXTURES}")


if __name__ == "__main__":
    main()
