"""JSON HTTP service around sessions.

One process serves one ontology. Sessions are created over HTTP, their
event logs live in a directory (one JSONL file per session), and the
lexicon is shared across sessions. On startup every existing log is
replayed, so a restart is invisible to clients.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, fields
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .elicitation import ElicitationConfig
from .inference import UnknownEntity, serialize_posterior
from .ontology import load_ontology_path
from .session import (
    Answer,
    CandidateNotOffered,
    Elicitation,
    Lexicon,
    NoActiveEpisode,
    Session,
    StorageUnavailable,
    read_event_log,
)


@dataclass
class ServiceConfig:
    ontology_path: str
    lexicon_path: str
    event_log_dir: str
    host: str = "127.0.0.1"
    port: int = 8000
    k: int = 3
    strategy: str = "infogain"
    threshold: float = 0.9
    seed: int = 0
    max_body_bytes: int = 16384
    cors_origin: str | None = "*"

    def __post_init__(self) -> None:
        if not (1 <= self.port <= 65535):
            raise ValueError("port must be in 1..65535")
        if self.max_body_bytes < 1:
            raise ValueError("max_body_bytes must be positive")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        extra = set(raw) - known
        if extra:
            raise ValueError(f"unknown config key {sorted(extra)[0]!r}")
        return cls(**raw)

    def elicitation_config(self) -> ElicitationConfig:
        return ElicitationConfig(
            k=self.k, strategy=self.strategy, threshold=self.threshold, seed=self.seed
        )


class MessageIn(BaseModel):
    text: str


class SelectionIn(BaseModel):
    word: str
    entity: str


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def _reply_json(reply: Elicitation | Answer) -> dict:
    if isinstance(reply, Elicitation):
        return {
            "type": "elicitation",
            "word": reply.word,
            "candidates": [{"id": c.id, "label": c.label} for c in reply.candidates],
        }
    return {
        "type": "answer",
        "bindings": [{"term": b.term, "node": b.node} for b in reply.bindings],
    }


def create_app(config: ServiceConfig) -> FastAPI:
    ontology = load_ontology_path(config.ontology_path)
    lexicon = Lexicon(config.lexicon_path)
    cfg = config.elicitation_config()
    log_dir = Path(config.event_log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)

    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    # Restore sessions left behind by a previous run.
    for log_path in sorted(log_dir.glob("*.jsonl")):
        events = read_event_log(log_path)
        sessions[log_path.stem] = Session.replay(
            events,
            ontology,
            config=cfg,
            lexicon=lexicon,
            session_id=log_path.stem,
            log_path=log_path,
        )

    app = FastAPI(title="lexlearn", docs_url=None, redoc_url=None)

    if config.cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.middleware("http")
    async def reject_oversize(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None and length.isdigit() and int(length) > config.max_body_bytes:
            return _error(400, "oversize_body", f"body exceeds {config.max_body_bytes} bytes")
        return await call_next(request)

    def get_session(session_id: str) -> Session | None:
        with registry_lock:
            return sessions.get(session_id)

    @app.post("/api/sessions", status_code=201)
    def create_session():
        session_id = uuid.uuid4().hex
        log_path = log_dir / f"{session_id}.jsonl"
        try:
            log_path.touch()
        except OSError as exc:
            return _error(503, "storage_unavailable", str(exc))
        session = Session(
            ontology, lexicon, cfg, session_id=session_id, log_path=log_path
        )
        with registry_lock:
            sessions[session_id] = session
        return {"session_id": session_id}

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageIn):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        if not body.text.strip():
            return _error(400, "empty_text", "message text is empty")
        try:
            reply = session.handle_message(body.text)
        except StorageUnavailable as exc:
            return _error(503, "storage_unavailable", str(exc))
        return _reply_json(reply)

    @app.post("/api/sessions/{session_id}/selections")
    def post_selection(session_id: str, body: SelectionIn):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        try:
            result = session.handle_selection(body.word, body.entity)
        except NoActiveEpisode as exc:
            return _error(409, "no_active_episode", str(exc))
        except CandidateNotOffered as exc:
            return _error(409, "candidate_not_offered", str(exc))
        except UnknownEntity as exc:
            return _error(409, "unknown_entity", str(exc))
        except StorageUnavailable as exc:
            return _error(503, "storage_unavailable", str(exc))
        payload = {
            "posterior": serialize_posterior(result.posterior),
            "status": "committed" if result.decision.committed else "learning",
        }
        if result.decision.committed:
            payload["committed_node"] = result.decision.node
        if result.candidates is not None:
            payload["candidates"] = [
                {"id": eid, "label": ontology.label(eid)} for eid in result.candidates
            ]
        if result.next_elicitation is not None:
            payload["next_elicitation"] = _reply_json(result.next_elicitation)
        return payload

    @app.get("/api/sessions/{session_id}/posterior")
    def get_posterior(session_id: str, word: str = ""):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        if not word.strip():
            return _error(400, "missing_word", "query parameter 'word' is required")
        return serialize_posterior(session.posterior_for(word))

    @app.get("/api/lexicon")
    def get_lexicon():
        return lexicon.as_dict()

    @app.get("/api/ontology")
    def get_ontology():
        return ontology.document

    return app
