"""Operator command line: serve, replay, analyze, simulate."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .analytics import UnknownTeamError, analytics_doc, figure_csv, figure_points
from .canonical import canonical_text
from .engine import CorruptLogError, replay_log_bytes, state_digest
from .evaluator import load_challenge
from .simulate import ScriptError, load_script, run_script, write_log


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (CorruptLogError, ScriptError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arginote")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the workspace service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=_env_port())
    serve.add_argument(
        "--data-dir", default=os.environ.get("ARGINOTE_DATA_DIR", "arginote-data")
    )
    serve.add_argument(
        "--challenge",
        action="append",
        required=True,
        metavar="FILE",
        help="challenge configuration JSON (repeatable)",
    )
    serve.set_defaults(handler=_cmd_serve)

    replay_cmd = sub.add_parser("replay", help="replay an event log and print its state digest")
    replay_cmd.add_argument("log", type=Path)
    replay_cmd.set_defaults(handler=_cmd_replay)

    analyze = sub.add_parser("analyze", help="print analytics for an event log")
    analyze.add_argument("log", type=Path)
    analyze.add_argument(
        "--csv", metavar="TEAM", help="emit the team's figure points as CSV instead of JSON"
    )
    analyze.set_defaults(handler=_cmd_analyze)

    simulate = sub.add_parser("simulate", help="generate an event log from a script")
    simulate.add_argument("--script", required=True, type=Path)
    simulate.add_argument("--seed", required=True, type=int)
    simulate.add_argument("--out", required=True, type=Path)
    simulate.set_defaults(handler=_cmd_simulate)

    return parser


def _env_port() -> int:
    raw = os.environ.get("ARGINOTE_PORT", "8000")
    try:
        return int(raw)
    except ValueError:
        print(f"warning: ignoring non-numeric ARGINOTE_PORT={raw!r}", file=sys.stderr)
        return 8000


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app
    from .store import SessionStore

    challenges = [load_challenge(path) for path in args.challenge]
    store = SessionStore(args.data_dir, challenges=challenges)
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    state = replay_log_bytes(args.log.read_bytes())
    print(state_digest(state))
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    from .engine import parse_log_bytes, replay

    events = parse_log_bytes(args.log.read_bytes())
    state = replay(events)
    if args.csv is not None:
        try:
            points = figure_points(state, args.csv)
        except UnknownTeamError:
            print(f"error: no team {args.csv!r} in this log", file=sys.stderr)
            return 1
        sys.stdout.write(figure_csv(points))
    else:
        print(canonical_text(analytics_doc(state)))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    script = load_script(args.script)
    _, events = run_script(script, args.seed)
    write_log(events, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
