"""Composition root: REST endpoints wiring engine, provider, ingest, stores."""

from __future__ import annotations

import os
import secrets
from importlib import resources

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from examsim.core.engine import (
    ApplyOutcome,
    ContinuationChoice,
    EngineDirective,
    ExamEngine,
    SessionConfig,
)
from examsim.core.errors import ExamCoreError, InvalidConfig
from examsim.core.session import ExamSession, Mode
from examsim.ingest.chunking import Document, DocumentFormat, chunk_document
from examsim.ingest.selection import select_excerpts
from examsim.provider.base import Provider, ProviderResponse
from examsim.provider.errors import ProviderError
from examsim.provider.http import OpenAICompatibleProvider
from examsim.provider.mock import ScriptedProvider
from examsim.runner import complete_directive
from examsim.service.config import API_TOKEN_ENV, ServiceConfig
from examsim.service.errors import ApiError, map_exception
from examsim.service.ratelimit import TokenBucketLimiter
from examsim.service.store import DocumentStore, SessionStore
from examsim.service.views import counters_view, entry_view, grade_view, session_view

_UNAUTHENTICATED_PATHS = {"/healthz"}


class CreateSessionBody(BaseModel):
    subject_area: str
    topic: str
    mode: str = "practice"
    language: str = "en"
    student_context: dict[str, str] = Field(default_factory=dict)
    document_ids: list[str] = Field(default_factory=list)


class AnswerBody(BaseModel):
    text: str


class ContinueBody(BaseModel):
    choice: str
    topic: str | None = None


class DocumentBody(BaseModel):
    title: str
    text: str
    format: str = "plain"


def bundled_rules_text() -> str:
    return (resources.files("examsim") / "data" / "demo.rules").read_text(encoding="utf-8")


def build_provider(config: ServiceConfig) -> Provider:
    if config.provider_kind == "mock":
        if config.provider_script:
            return ScriptedProvider.from_path(
                config.provider_script, token_budget=config.request_token_budget
            )
        return ScriptedProvider.from_script(
            bundled_rules_text(), token_budget=config.request_token_budget
        )
    return OpenAICompatibleProvider(
        base_url=config.provider_base_url,
        model=config.provider_model,
        temperature=config.temperature,
        timeout_s=config.timeout_s,
        completions_path=config.provider_path,
        token_budget=config.request_token_budget,
    )


def create_app(
    config: ServiceConfig | None = None,
    *,
    provider: Provider | None = None,
    engine: ExamEngine | None = None,
    limiter: TokenBucketLimiter | None = None,
    api_token: str | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    config.validate()
    token = api_token if api_token is not None else os.environ.get(API_TOKEN_ENV, "")
    if not token:
        raise ValueError(f"no api token: set {API_TOKEN_ENV} or pass api_token")

    engine = engine or ExamEngine()
    provider = provider or build_provider(config)
    limiter = limiter or TokenBucketLimiter(
        capacity=config.rate_capacity, refill_per_s=config.rate_refill_per_s
    )
    sessions = SessionStore(config.sessions_dir)
    documents = DocumentStore(config.documents_dir)

    app = FastAPI(title="examsim", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.sessions = sessions
    app.state.documents = documents

    # ------------------------------------------------------------------
    # Cross-cutting: auth, rate limit, error mapping
    # ------------------------------------------------------------------

    @app.middleware("http")
    async def auth_and_rate_limit(request: Request, call_next):
        if request.url.path in _UNAUTHENTICATED_PATHS:
            return await call_next(request)
        header = request.headers.get("Authorization", "")
        presented = header.removeprefix("Bearer ").strip() if header.startswith("Bearer ") else ""
        if not presented or not secrets.compare_digest(presented, token):
            return _error_response(401, ApiError("unauthorized", "missing or invalid bearer token"))
        allowed, retry_after = limiter.check(presented)
        if not allowed:
            response = _error_response(
                429, ApiError("rate_limited", "too many requests for this token")
            )
            response.headers["Retry-After"] = str(retry_after)
            return response
        return await call_next(request)

    @app.exception_handler(ExamCoreError)
    async def core_error_handler(request: Request, exc: ExamCoreError):
        status, error = map_exception(exc)
        return _error_response(status, error)

    @app.exception_handler(ProviderError)
    async def provider_error_handler(request: Request, exc: ProviderError):
        status, error = map_exception(exc)
        return _error_response(status, error)

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return _error_response(400, ApiError("invalid_config", str(exc.errors()[:3])))

    # ------------------------------------------------------------------
    # Endpoints
    # ------------------------------------------------------------------

    @app.get("/healthz")
    def healthz() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> JSONResponse:
        try:
            mode = Mode(body.mode.lower())
        except ValueError:
            raise InvalidConfig(f"unknown mode: {body.mode!r}") from None
        excerpts = _excerpts_for(body.document_ids, body.topic)
        session, directive = engine.create_session(
            SessionConfig(
                subject_area=body.subject_area,
                topic=body.topic,
                mode=mode,
                language=body.language,
                student_context=body.student_context,
                material_refs=tuple(body.document_ids),
                material_excerpts=excerpts,
            )
        )
        _, response = _round_trip(session, directive)
        sessions.save(session)
        payload = session_view(session)
        payload["latency_ms"] = response.latency_ms
        return JSONResponse(payload, status_code=201)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> JSONResponse:
        with sessions.lock(session_id):
            session = _load_or_404(session_id)
            return JSONResponse(session_view(session))

    @app.post("/api/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: AnswerBody) -> JSONResponse:
        with sessions.lock(session_id):
            session = _load_or_404(session_id)
            directive = engine.submit_answer(session, body.text)
            outcome, response = _round_trip(session, directive)
            sessions.save(session)
            payload = {
                "examiner_message": entry_view(session, outcome.entry),
                "grade": grade_view(outcome.grade) if outcome.grade else None,
                "latency_ms": response.latency_ms,
                **counters_view(session),
            }
            return JSONResponse(payload)

    @app.post("/api/sessions/{session_id}/hint")
    def post_hint(session_id: str) -> JSONResponse:
        with sessions.lock(session_id):
            session = _load_or_404(session_id)
            directive = engine.request_hint(session)
            outcome, response = _round_trip(session, directive)
            sessions.save(session)
            payload = {
                "hint_message": entry_view(session, outcome.entry),
                "latency_ms": response.latency_ms,
                **counters_view(session),
            }
            return JSONResponse(payload)

    @app.post("/api/sessions/{session_id}/grade")
    def post_grade(session_id: str) -> JSONResponse:
        with sessions.lock(session_id):
            session = _load_or_404(session_id)
            directive = engine.request_grade(session)
            outcome, response = _round_trip(session, directive)
            sessions.save(session)
            payload = {
                "grade": grade_view(outcome.grade) if outcome.grade else None,
                "message": entry_view(session, outcome.entry),
                "latency_ms": response.latency_ms,
                **counters_view(session),
            }
            return JSONResponse(payload)

    @app.post("/api/sessions/{session_id}/continue")
    def post_continue(session_id: str, body: ContinueBody) -> JSONResponse:
        choice = _parse_choice(body)
        with sessions.lock(session_id):
            session = _load_or_404(session_id)
            excerpts = None
            if choice.kind == ContinuationChoice.NEW_TOPIC and session.material_refs:
                excerpts = _excerpts_for(session.material_refs, choice.topic or "")
            directive = engine.continue_session(session, choice, material_excerpts=excerpts)
            _, response = _round_trip(session, directive)
            sessions.save(session)
            payload = session_view(session)
            payload["latency_ms"] = response.latency_ms
            return JSONResponse(payload)

    @app.post("/api/documents", status_code=201)
    def post_document(body: DocumentBody) -> JSONResponse:
        try:
            fmt = DocumentFormat(body.format.lower())
        except ValueError:
            raise InvalidConfig(f"unknown document format: {body.format!r}") from None
        if not body.title.strip():
            raise InvalidConfig("document title must be non-empty")
        if not body.text:
            raise InvalidConfig("document text must be non-empty")
        document = chunk_document(
            Document(id=secrets.token_urlsafe(9), title=body.title, body=body.text, format=fmt)
        )
        documents.save(document)
        return JSONResponse(
            {
                "document_id": document.id,
                "title": document.title,
                "chunk_count": len(document.chunks),
            },
            status_code=201,
        )

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    def _load_or_404(session_id: str) -> ExamSession:
        session = sessions.load(session_id)
        if session is None:
            raise _NotFound(session_id)
        return session

    def _excerpts_for(document_ids: list[str] | tuple[str, ...], topic: str) -> tuple[str, ...]:
        loaded: list[Document] = []
        for document_id in document_ids:
            document = documents.load(document_id)
            if document is None:
                raise InvalidConfig(f"unknown document id: {document_id!r}")
            loaded.append(document)
        if not loaded:
            return ()
        chunks = select_excerpts(loaded, topic, budget_tokens=config.material_token_budget)
        return tuple(chunk.text for chunk in chunks)

    def _round_trip(
        session: ExamSession, directive: EngineDirective
    ) -> tuple[ApplyOutcome, ProviderResponse]:
        return complete_directive(engine, provider, session, directive)

    @app.exception_handler(_NotFound)
    async def not_found_handler(request: Request, exc: _NotFound):
        return _error_response(404, ApiError("not_found", f"no session {exc.session_id!r}"))

    return app


class _NotFound(Exception):
    def __init__(self, session_id: str) -> None:
        super().__init__(session_id)
        self.session_id = session_id


def _parse_choice(body: ContinueBody) -> ContinuationChoice:
    kind = body.choice.lower()
    if kind == ContinuationChoice.SAME_TOPIC:
        return ContinuationChoice.same_topic()
    if kind == ContinuationChoice.NEW_TOPIC:
        if not (body.topic or "").strip():
            raise InvalidConfig("continuation with a new topic requires 'topic'")
        return ContinuationChoice.new_topic(body.topic or "")
    if kind == ContinuationChoice.CONCLUDE:
        return ContinuationChoice.conclude()
    raise InvalidConfig(f"unknown continuation choice: {body.choice!r}")


def _error_response(status: int, error: ApiError) -> JSONResponse:
    return JSONResponse(error.body(), status_code=status)
