"""HTTP surface: sessions, live analysis, dumps, and corpus stats.

Engines are shared read-only; each session has its own mutation lock, so
concurrent edits to one session serialize while different sessions analyze
fully in parallel. Handlers are sync functions and run on the threadpool.
"""

from __future__ import annotations

import json
import threading
import time
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Callable, Iterator, Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse

from .. import __version__
from ..config import AppConfig
from ..engines import Engines, load_engines
from ..errors import (
    EditAfterDeadline,
    EmptyDraft,
    EnginesNotReady,
    QuizwrightError,
    SessionFinalized,
    StaleReport,
    UnknownSession,
)
from ..session import (
    Session,
    analyze,
    apply_edit,
    create_session,
    finalize_submission,
    maybe_snapshot,
)
from .schemas import (
    CreateSessionBody,
    CreateSessionResponse,
    HealthResponse,
    DraftBody,
    WireReport,
    report_to_wire,
)

_STATUS_BY_CODE = {
    UnknownSession.code: 404,
    SessionFinalized.code: 409,
    StaleReport.code: 409,
    EditAfterDeadline.code: 410,
    EmptyDraft.code: 422,
    EnginesNotReady.code: 503,
}


class EngineHolder:
    """Engines plus their loading status; loading may happen off-thread."""

    def __init__(self) -> None:
        self._engines: Optional[Engines] = None
        self.error: Optional[str] = None
        self._lock = threading.Lock()

    @property
    def status(self) -> str:
        if self.error is not None:
            return "failed"
        return "ready" if self._engines is not None else "loading"

    def set(self, engines: Engines) -> None:
        with self._lock:
            self._engines = engines

    def get(self) -> Engines:
        engines = self._engines
        if engines is None:
            raise EnginesNotReady(
                "engines are still loading" if self.error is None else self.error
            )
        return engines


class SessionStore:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._master = threading.Lock()

    def add(self, session: Session) -> None:
        with self._master:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()

    def get(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._master:
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(f"no such session {session_id!r}")
            return session, self._locks[session_id]


def create_app(
    config: AppConfig | None = None,
    engines: Engines | None = None,
    base_dir: Path | None = None,
    defer_engines: bool = False,
    clock: Callable[[], float] = time.time,
) -> FastAPI:
    """Build the service.

    Pass preloaded ``engines`` to start ready (tests do); otherwise loading
    happens on a background thread at startup so health stays responsive.
    ``defer_engines`` skips loading entirely, leaving the app in its startup
    state.
    """
    config = config or AppConfig()
    base_dir = base_dir or Path.cwd()
    holder = EngineHolder()
    if engines is not None:
        holder.set(engines)
    load_on_startup = engines is None and not defer_engines

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        if load_on_startup:

            def work() -> None:
                try:
                    holder.set(load_engines(config, base_dir))
                except Exception as exc:  # noqa: BLE001 - reported via /api/health
                    holder.error = f"{type(exc).__name__}: {exc}"

            threading.Thread(target=work, name="engine-loader", daemon=True).start()
        yield

    app = FastAPI(title="quizwright", version=__version__, lifespan=lifespan)
    app.state.holder = holder
    app.state.config = config
    app.state.clock = clock
    app.state.store = SessionStore()
    app.state.submissions_lock = threading.Lock()
    app.state.submissions_path = config.resolve_path(config.submissions_path, base_dir)
    app.state.dumps_dir = config.resolve_path(config.dumps_dir, base_dir)

    @app.exception_handler(QuizwrightError)
    def _domain_error(_: Request, exc: QuizwrightError) -> JSONResponse:
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    def _validation_error(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"code": "ValidationError", "message": str(exc.errors())},
        )

    @app.post(
        "/api/sessions", status_code=201, response_model=CreateSessionResponse
    )
    def create(body: CreateSessionBody | None = None) -> CreateSessionResponse:
        app.state.holder.get()  # 503 until engines are ready
        now = app.state.clock()
        duration = body.game.duration_s if body is not None and body.game else None
        session = create_session(
            now, game_duration_s=duration, category=body.category if body else None
        )
        app.state.store.add(session)
        return CreateSessionResponse(session_id=session.id)

    @app.put("/api/sessions/{session_id}/draft", response_model=WireReport)
    def put_draft(session_id: str, body: DraftBody) -> WireReport:
        engines = app.state.holder.get()
        session, lock = app.state.store.get(session_id)
        now = app.state.clock()
        with lock:
            apply_edit(session, body.text, body.answer, now, engines)
            maybe_snapshot(session, now, interval=config.snapshot_interval_s)
            report = analyze(session, engines, now=now)
            return report_to_wire(report)

    @app.post("/api/sessions/{session_id}/submit")
    def submit(session_id: str) -> dict:
        engines = app.state.holder.get()
        session, lock = app.state.store.get(session_id)
        now = app.state.clock()
        with lock:
            report = analyze(session, engines, now=now)
            record = finalize_submission(session, report, now, engines)
            snapshot_lines = [snap.to_json_line() for snap in session.snapshots]
        payload = record.to_json_dict()
        path: Path = app.state.submissions_path
        with app.state.submissions_lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(payload, ensure_ascii=False) + "\n")
        dumps_dir: Path = app.state.dumps_dir
        dumps_dir.mkdir(parents=True, exist_ok=True)
        (dumps_dir / f"{session_id}.jsonl").write_text(
            "".join(line + "\n" for line in snapshot_lines), encoding="utf-8"
        )
        return payload

    @app.get("/api/sessions/{session_id}/dump")
    def dump(session_id: str) -> StreamingResponse:
        session, lock = app.state.store.get(session_id)
        with lock:
            lines = [snap.to_json_line() for snap in session.snapshots]

        def stream() -> Iterator[bytes]:
            for line in lines:
                yield (line + "\n").encode("utf-8")

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    @app.get("/api/corpus/distribution")
    def distribution() -> dict:
        engines = app.state.holder.get()
        return {
            "categories": dict(engines.question_set.category_counts),
            "subcategories": dict(engines.question_set.subcategory_counts),
        }

    @app.get("/api/health", response_model=HealthResponse)
    def health(response: Response) -> HealthResponse:
        holder: EngineHolder = app.state.holder
        out = HealthResponse(
            status="ok", version=__version__, engines=holder.status
        )
        if holder.status == "ready":
            engines = holder.get()
            out.corpus_hash = engines.corpus_hash
            out.n_answer_docs = engines.answer_index.n_docs
            out.n_question_docs = engines.question_index.n_docs
        elif holder.status == "failed":
            out.detail = holder.error
        response.headers["Cache-Control"] = "no-store"
        return out

    if config.frontend_dir:
        static_root = config.resolve_path(config.frontend_dir, base_dir)
        if static_root.is_dir():
            from fastapi.staticfiles import StaticFiles

            app.mount(
                "/", StaticFiles(directory=static_root, html=True), name="ui"
            )

    return app
