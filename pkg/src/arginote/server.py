"""HTTP + WebSocket boundary over the session store."""

from __future__ import annotations

import json
from typing import Any, Mapping

from fastapi import FastAPI
from starlette.concurrency import run_in_threadpool
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.requests import Request
from starlette.responses import Response
from starlette.websockets import WebSocket, WebSocketDisconnect

from .analytics import analytics_doc
from .canonical import canonical_text
from .engine import (
    CommandRejected,
    CreateTeam,
    JoinTeam,
    PaperSubmitted,
    StorageFailureError,
    SubmitPaper,
    team_workspace_doc,
)
from .model import PaperDraft, PaperKind, Violation
from .store import SessionStore, SubscriptionClosed

# WebSocket close codes (application range).
WS_UNKNOWN_TEAM = 4404
WS_BAD_REQUEST = 4400
WS_SLOW_CONSUMER = 4008

_STATUS_BY_CODE = {
    "PayloadTooLarge": 413,
    "FinalAlreadyExists": 409,
    "DuplicateKind": 409,
    "UnknownSession": 404,
    "UnknownTeam": 404,
    "UnknownChallenge": 404,
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str, violations: tuple[Violation, ...] = ()):
        self.status = status
        self.code = code
        self.detail = detail
        self.violations = violations
        super().__init__(detail)


def _json_response(doc: Any, status: int = 200) -> Response:
    # Canonical bodies keep reads byte-identical across restarts and replays.
    return Response(canonical_text(doc), status_code=status, media_type="application/json")


def _error_response(status: int, code: str, detail: str, violations: tuple[Violation, ...] = ()) -> Response:
    doc = {"error": code, "detail": detail, "violations": [v.to_doc() for v in violations]}
    return _json_response(doc, status=status)


def _rejection_response(exc: CommandRejected) -> Response:
    status = 400
    code = "ValidationFailed"
    for priority in ("PayloadTooLarge", "FinalAlreadyExists", "DuplicateKind"):
        if priority in exc.codes:
            status, code = _STATUS_BY_CODE[priority], priority
            break
    else:
        if len(exc.codes) == 1 and exc.codes[0] in _STATUS_BY_CODE:
            code = exc.codes[0]
            status = _STATUS_BY_CODE[code]
        elif len(exc.codes) == 1:
            code = exc.codes[0]
    detail = "; ".join(v.detail for v in exc.violations)
    return _error_response(status, code, detail, exc.violations)


async def _request_doc(request: Request) -> dict[str, Any]:
    raw = await request.body()
    try:
        doc = json.loads(raw, parse_constant=_reject_constant)
    except ValueError as exc:
        raise ApiError(400, "MalformedBody", f"request body is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ApiError(400, "MalformedBody", "request body must be a JSON object")
    return doc


def _reject_constant(value: str) -> Any:
    raise ValueError(f"non-finite constant {value} not allowed")


def _body_str(doc: Mapping[str, Any], key: str) -> str:
    value = doc.get(key)
    if not isinstance(value, str):
        raise ApiError(400, "MalformedBody", f"{key} must be a string")
    return value


def _draft_from_doc(doc: Mapping[str, Any]) -> tuple[str, PaperDraft]:
    author = _body_str(doc, "author")
    title = _body_str(doc, "title")
    kind_raw = _body_str(doc, "kind")
    try:
        kind = PaperKind(kind_raw)
    except ValueError:
        raise ApiError(400, "MalformedBody", f'kind must be "solution" or "argument", got {kind_raw!r}')
    argument = doc.get("argument", "")
    if not isinstance(argument, str):
        raise ApiError(400, "MalformedBody", "argument must be a string")
    citations = doc.get("citations", [])
    if not isinstance(citations, list) or not all(isinstance(c, str) for c in citations):
        raise ApiError(400, "MalformedBody", "citations must be a list of paper ids")
    is_final = doc.get("is_final", False)
    if not isinstance(is_final, bool):
        raise ApiError(400, "MalformedBody", "is_final must be a boolean")
    draft = PaperDraft(
        title=title,
        kind=kind,
        argument=argument,
        payload=doc.get("payload"),
        citations=tuple(citations),
        is_final=is_final,
    )
    return author, draft


def _event_message(event: Any) -> str:
    doc = event.to_doc()
    return canonical_text({"type": "event", "seq": doc["seq"], "at": doc["at"], "body": doc["body"]})


def create_app(store: SessionStore, *, heartbeat_seconds: float = 10.0) -> FastAPI:
    app = FastAPI(title="arginote", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError) -> Response:
        return _error_response(exc.status, exc.code, exc.detail, exc.violations)

    @app.exception_handler(CommandRejected)
    async def handle_rejection(request: Request, exc: CommandRejected) -> Response:
        return _rejection_response(exc)

    @app.exception_handler(StorageFailureError)
    async def handle_storage_failure(request: Request, exc: StorageFailureError) -> Response:
        return _error_response(500, "StorageFailure", str(exc))

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(request: Request, exc: StarletteHTTPException) -> Response:
        code = "NotFound" if exc.status_code == 404 else "HttpError"
        return _error_response(exc.status_code, code, str(exc.detail))

    @app.post("/v1/sessions")
    async def create_session(request: Request) -> Response:
        doc = await _request_doc(request)
        challenge_id = _body_str(doc, "challenge_id")
        handle, events = await run_in_threadpool(store.create_session, challenge_id)
        return _json_response({"session_id": handle.id, "seq": events[0].seq}, status=201)

    @app.post("/v1/sessions/{session_id}/teams")
    async def create_team(session_id: str, request: Request) -> Response:
        doc = await _request_doc(request)
        name = _body_str(doc, "name")
        _, events = await run_in_threadpool(store.execute, CreateTeam(session=session_id, name=name))
        return _json_response({"team_id": events[0].body.team, "seq": events[0].seq}, status=201)

    @app.post("/v1/teams/{team_id}/members")
    async def join_team(team_id: str, request: Request) -> Response:
        doc = await _request_doc(request)
        display_name = _body_str(doc, "display_name")
        _, events = await run_in_threadpool(
            store.execute, JoinTeam(team=team_id, display_name=display_name)
        )
        return _json_response({"member_id": events[0].body.member, "seq": events[0].seq}, status=201)

    @app.post("/v1/teams/{team_id}/papers")
    async def submit_paper(team_id: str, request: Request) -> Response:
        doc = await _request_doc(request)
        author, draft = _draft_from_doc(doc)
        _, events = await run_in_threadpool(
            store.execute, SubmitPaper(team=team_id, author=author, draft=draft)
        )
        body = events[0].body
        assert isinstance(body, PaperSubmitted)
        out: dict[str, Any] = {"paper_id": body.paper.id, "seq": events[0].seq}
        if body.paper.score is not None:
            out["score"] = body.paper.score
        return _json_response(out, status=201)

    @app.get("/v1/teams/{team_id}/workspace")
    async def workspace(team_id: str) -> Response:
        handle = store.session_for_team(team_id)
        return _json_response(team_workspace_doc(handle.state, team_id))

    @app.get("/v1/sessions/{session_id}/analytics")
    async def analytics(session_id: str) -> Response:
        handle = store.session(session_id)
        doc = await run_in_threadpool(analytics_doc, handle.state)
        return _json_response(doc)

    @app.get("/v1/sessions/{session_id}/export")
    async def export_log(session_id: str) -> Response:
        handle = store.session(session_id)
        data = await run_in_threadpool(handle.export_bytes)
        return Response(data, media_type="application/x-ndjson")

    @app.websocket("/v1/teams/{team_id}/stream")
    async def stream(websocket: WebSocket, team_id: str) -> None:
        await websocket.accept()
        raw_from_seq = websocket.query_params.get("from_seq", "0")
        try:
            from_seq = int(raw_from_seq)
            if from_seq < 0:
                raise ValueError
        except ValueError:
            await websocket.close(code=WS_BAD_REQUEST, reason="from_seq must be a non-negative integer")
            return
        try:
            handle = store.session_for_team(team_id)
        except CommandRejected:
            await websocket.close(code=WS_UNKNOWN_TEAM, reason="unknown team")
            return

        backfill, sub = handle.subscribe(from_seq)
        try:
            for event in backfill:
                await websocket.send_text(_event_message(event))
            while True:
                try:
                    event = await run_in_threadpool(sub.get, heartbeat_seconds)
                except SubscriptionClosed:
                    await websocket.close(code=WS_SLOW_CONSUMER, reason="stream buffer overflow")
                    return
                if event is None:
                    await websocket.send_text('{"type":"heartbeat"}')
                else:
                    await websocket.send_text(_event_message(event))
        except WebSocketDisconnect:
            pass
        finally:
            handle.unsubscribe(sub)

    return app
