"""HTTP/JSON service over the engine, matcher, scheduler, and store.

Every failure body is ``{"code", "detail", "extras"}`` with a fixed
code-to-status mapping so clients can switch on ``code`` alone; the
framework's own request-validation failures are folded into BAD_REQUEST
(400) to keep that contract. Per-session mutations are serialized through
the store's session lock; everything else is freely concurrent over the
immutable knowledge base.
"""

from __future__ import annotations

import logging
import time
from dataclasses import replace
from datetime import datetime, timezone
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import codec
from .dsl import ParseError, parse_kb
from .engine import (
    InvalidAnswer,
    Recommendation,
    SessionCompleted,
    answer as engine_answer,
    current_prompt,
    start_session,
)
from .matching import build_index, match_complaint, normalize
from .model import DEFAULT_MAX_DEPTH, KnowledgeBase, tree_stats, validate_kb
from .reminders import UnknownDose, acknowledge, build_plan, due_reminders
from .store import NotFound, RevisionConflict, SessionRecord, SessionStore

_CODE_STATUS = {
    "NO_MATCH": 422,
    "INVALID_ANSWER": 422,
    "SESSION_COMPLETED": 409,
    "NOT_FOUND": 404,
    "CONFLICT": 409,
    "BAD_REQUEST": 400,
}

logger = logging.getLogger("smartdoc.api")


class ApiError(Exception):
    """A request failure with a machine code, mapped onto a fixed HTTP status."""

    def __init__(self, code: str, detail: str, extras: dict | None = None):
        self.code = code
        self.status = _CODE_STATUS[code]
        self.detail = detail
        self.extras = extras or {}
        super().__init__(f"{code}: {detail}")


class Utf8JSONResponse(JSONResponse):
    media_type = "application/json; charset=utf-8"


class ComplaintBody(BaseModel):
    complaint: str


class AnswerBody(BaseModel):
    answer: str


class AckBody(BaseModel):
    medicine: str
    sequence: int


def create_app(
    kb: KnowledgeBase,
    store: SessionStore,
    clock: Callable[[], datetime] | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    """Wire the service around one validated KB and one session store.

    ``clock`` injects the server's notion of now (tests pass a fixed one);
    ``ui_dir`` optionally mounts a static chat client at the web root.
    """
    tick = clock or (lambda: datetime.now(timezone.utc))
    index = build_index(kb)
    stats = tree_stats(kb)
    app = FastAPI(title="smartdoc", default_response_class=Utf8JSONResponse)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def now_s() -> datetime:
        return codec.utc_second(tick())

    @app.exception_handler(ApiError)
    async def on_api_error(_request: Request, exc: ApiError):
        return Utf8JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "detail": exc.detail, "extras": exc.extras},
        )

    @app.exception_handler(RequestValidationError)
    async def on_invalid_request(_request: Request, exc: RequestValidationError):
        messages = [str(e.get("msg", e)) for e in exc.errors()]
        return Utf8JSONResponse(
            status_code=400,
            content={
                "code": "BAD_REQUEST",
                "detail": "malformed request",
                "extras": {"errors": messages},
            },
        )

    @app.middleware("http")
    async def log_request(request: Request, call_next):
        t0 = time.perf_counter()
        response = await call_next(request)
        elapsed_ms = (time.perf_counter() - t0) * 1000
        logger.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            elapsed_ms,
        )
        return response

    def _load(session_id: str) -> SessionRecord:
        try:
            return store.load(session_id)
        except NotFound:
            raise ApiError("NOT_FOUND", f"no session {session_id!r}") from None

    @app.post("/api/v1/sessions", status_code=201)
    def create_session(body: ComplaintBody):
        complaint = body.complaint.strip()
        if not complaint:
            raise ApiError("BAD_REQUEST", "complaint must be non-empty")
        candidates = match_complaint(index, complaint)
        if not candidates:
            raise ApiError(
                "NO_MATCH",
                f"no entry point matches complaint {complaint!r}",
                {"tokens": normalize(complaint)},
            )
        session, prompt = start_session(kb, index, complaint, now=tick())
        plan = None
        if isinstance(prompt, Recommendation):
            plan = build_plan(prompt.medicines, start=now_s(), session_id=session.session_id)
        store.save(SessionRecord(session=session, plan=plan))
        return {
            "session_id": session.session_id,
            "candidates": [
                {
                    "disease": c.disease,
                    "entry": c.entry,
                    "score": c.score,
                    "matched": sorted(c.matched),
                }
                for c in candidates
            ],
            "prompt": codec.prompt_to_dict(prompt),
        }

    @app.post("/api/v1/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerBody):
        with store.lock(session_id):
            record = _load(session_id)
            session = record.session
            try:
                prompt = engine_answer(kb, session, body.answer, now=tick())
            except SessionCompleted:
                raise ApiError(
                    "SESSION_COMPLETED", f"session {session_id} is already completed"
                ) from None
            except InvalidAnswer as exc:
                raise ApiError(
                    "INVALID_ANSWER", str(exc), {"valid": list(exc.valid)}
                ) from None
            plan = record.plan
            if isinstance(prompt, Recommendation) and plan is None:
                plan = build_plan(prompt.medicines, start=now_s(), session_id=session_id)
            try:
                store.save(replace(record, session=session, plan=plan))
            except RevisionConflict as exc:
                raise ApiError("CONFLICT", str(exc)) from None
            return {"prompt": codec.prompt_to_dict(prompt), "state": session.state.value}

    @app.get("/api/v1/sessions/{session_id}")
    def get_session(session_id: str):
        record = _load(session_id)
        return {
            "session": codec.session_to_dict(record.session),
            "transcript": codec.transcript_to_dict(record.session.transcript),
            "prompt": codec.prompt_to_dict(current_prompt(kb, record.session)),
        }

    def _reminders_view(record: SessionRecord, now: datetime) -> dict:
        plan = record.plan
        if plan is None:
            return {"due": [], "upcoming": [], "plan": None}
        upcoming = [d for d in plan.doses if not d.acknowledged and d.due > now][:3]
        return {
            "due": [codec.dose_to_dict(d) for d in due_reminders(plan, now)],
            "upcoming": [codec.dose_to_dict(d) for d in upcoming],
            "plan": codec.plan_to_dict(plan),
        }

    @app.get("/api/v1/sessions/{session_id}/reminders")
    def get_reminders(session_id: str, now: str | None = None):
        record = _load(session_id)
        if now is None:
            at = now_s()
        else:
            try:
                at = codec.ts_from_str(now)
            except ValueError:
                raise ApiError(
                    "BAD_REQUEST", f"cannot parse now={now!r} as an RFC 3339 timestamp"
                ) from None
        return _reminders_view(record, at)

    @app.post("/api/v1/sessions/{session_id}/reminders/acknowledgements")
    def post_acknowledgement(session_id: str, body: AckBody):
        with store.lock(session_id):
            record = _load(session_id)
            if record.plan is None:
                raise ApiError("CONFLICT", f"session {session_id} has no reminder plan yet")
            try:
                plan = acknowledge(record.plan, body.medicine, body.sequence)
            except UnknownDose as exc:
                raise ApiError("NOT_FOUND", str(exc)) from None
            if plan is not record.plan:
                record = replace(record, plan=plan)
                store.save(record)
            return _reminders_view(record, now_s())

    @app.post("/api/v1/kb/validate")
    async def post_kb_validate(request: Request, max_depth: int = DEFAULT_MAX_DEPTH):
        try:
            text = (await request.body()).decode("utf-8")
        except UnicodeDecodeError:
            raise ApiError("BAD_REQUEST", "body must be UTF-8 text") from None
        try:
            raw = parse_kb(text)
        except ParseError as exc:
            finding = {
                "severity": "error",
                "code": "PARSE_ERROR",
                "disease": None,
                "node": None,
                "message": str(exc),
            }
            return {"findings": [finding]}
        report = validate_kb(raw, max_depth)
        return {"findings": [codec.finding_to_dict(f) for f in report.findings]}

    @app.get("/api/v1/kb/summary")
    def get_kb_summary():
        return {
            "title": kb.title,
            "version": kb.version,
            "diseases": [
                {
                    "id": d.id,
                    "entries": stats[d.id].entries,
                    "max_depth": stats[d.id].max_depth,
                    "nodes": stats[d.id].nodes,
                    "leaves": stats[d.id].leaves,
                }
                for d in kb.diseases
            ],
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
