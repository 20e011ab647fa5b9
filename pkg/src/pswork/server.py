"""HTTP session service for playing the game manually.

Each session holds one configuration plus an undo stack; moves are addressed
by witness digests so that a move applied against a changed configuration is
rejected as stale instead of silently doing something else.  The service is
a local desk tool: it binds localhost and has no authentication.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse

from .errors import ParseError, StaleMove, ValidationError, WorkbenchError
from .formats import ModelBinding, NamedMorphism, parse_document, parse_morphism_payload
from .gametrace import trace_document_envelope
from .presheaf import Presheaf
from .reflection import (
    GameConfig,
    Move,
    MoveKind,
    Trace,
    TraceStep,
    apply_move,
    config_digest,
    enumerate_moves,
    move_digest,
)

MOVE_ENUMERATION_CAP = 5000


@dataclass
class Session:
    session_id: str
    model: ModelBinding
    initial: NamedMorphism
    current: GameConfig
    history: list[tuple[Move, GameConfig]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def status(self) -> str:
        return "won" if self.current.won() else "open"


@dataclass
class SessionStore:
    sessions: dict[str, Session] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def add(self, session: Session) -> None:
        with self.lock:
            self.sessions[session.session_id] = session

    def get(self, session_id: str) -> Session:
        with self.lock:
            if session_id not in self.sessions:
                raise HTTPException(status_code=404, detail="unknown session")
            return self.sessions[session_id]


def _elem_labels(x: Presheaf, binding: ModelBinding) -> dict[str, list[str]]:
    """Positional element labels per object name, stable within a snapshot."""
    out = {}
    for objname in binding.base.object_order():
        oid = binding.base.object_ids[objname]
        out[objname] = [f"{objname}:{i}" for i in range(len(x.sets[oid]))]
    return out


def _component_tables(cfg: GameConfig, binding: ModelBinding) -> dict:
    base = binding.base
    out = {}
    for objname in base.object_order():
        oid = base.object_ids[objname]
        xs = list(cfg.x.sets[oid])
        ys = {e: i for i, e in enumerate(cfg.y.sets[oid])}
        comp = cfg.m.components[oid]
        out[objname] = [ys[comp(e)] for e in xs]
    return out


def _state_payload(session: Session) -> dict:
    cfg = session.current
    binding = session.model
    return {
        "session_id": session.session_id,
        "status": session.status,
        "won": cfg.won(),
        "digest": config_digest(cfg),
        "history_length": len(session.history),
        "conditions": [
            {"index": i, "name": session.model.model.name_of(i)}
            for i in range(len(session.model.model.conditions))
        ],
        "x": _elem_labels(cfg.x, binding),
        "y": _elem_labels(cfg.y, binding),
        "m": _component_tables(cfg, binding),
    }


def _witness_description(mv: Move, binding: ModelBinding) -> dict:
    from .reflection import witness_positions

    out = {}
    for name, w in (("f", mv.f), ("h", mv.h), ("h2", mv.h2)):
        if w is None:
            continue
        pos = witness_positions(w)
        table = {}
        for oi, objname in enumerate(binding.base.object_order()):
            if pos.get(oi):
                table[objname] = pos[oi]
        out[name] = table
    return out


def _move_payload(cfg: GameConfig, mv: Move, binding: ModelBinding) -> dict:
    return {
        "digest": move_digest(cfg, mv),
        "kind": mv.kind.value,
        "condition": mv.condition,
        "condition_name": binding.model.name_of(mv.condition),
        "witnesses": _witness_description(mv, binding),
    }


def _enumerate_with_cap(cfg: GameConfig, kinds, conditions, productive: bool = False):
    out = []
    for mv in enumerate_moves(cfg, kinds=kinds, conditions=conditions,
                              productive_only=productive):
        out.append(mv)
        if len(out) >= MOVE_ENUMERATION_CAP:
            break
    return out


def create_session_from_docs(store: SessionStore, model_doc: dict, config_doc: dict) -> str:
    if model_doc.get("kind") != "model":
        raise ParseError("$.kind", "model document expected")
    mb = parse_document(model_doc).value
    if config_doc.get("kind") != "morphism":
        raise ParseError("$.kind", "morphism document expected for the configuration")
    payload = dict(config_doc["payload"])
    own_base = payload.pop("base", None)
    if own_base is not None:
        from .formats import parse_base

        own = parse_base(own_base, "$.payload.base")
        if own.payload != mb.base.payload:
            raise ParseError("$.payload.base", "configuration's base differs from the model's")
    nm = parse_morphism_payload(payload, mb.base, "$.payload")
    session = Session(
        session_id=uuid.uuid4().hex,
        model=mb,
        initial=nm,
        current=GameConfig(mb.model, nm.morphism),
    )
    store.add(session)
    return session.session_id


def create_app(ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="pswork session service")
    store = SessionStore()
    app.state.store = store

    @app.exception_handler(WorkbenchError)
    async def _workbench_error(request, exc):
        status = 409 if isinstance(exc, StaleMove) else 422
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.post("/sessions")
    def create_session(body: dict):
        model_doc = body.get("model")
        config_doc = body.get("config")
        if not isinstance(model_doc, dict) or not isinstance(config_doc, dict):
            raise HTTPException(status_code=422, detail="need 'model' and 'config' documents")
        session_id = create_session_from_docs(store, model_doc, config_doc)
        return _state_payload(store.get(session_id))

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        return _state_payload(store.get(session_id))

    @app.get("/sessions/{session_id}/moves")
    def list_moves(
        session_id: str,
        kind: str | None = Query(default=None),
        condition: int | None = Query(default=None),
        productive: bool = Query(default=False),
        page: int = Query(default=0, ge=0),
        page_size: int = Query(default=50, ge=1, le=500),
    ):
        session = store.get(session_id)
        kinds = None
        if kind is not None:
            try:
                kinds = [MoveKind(kind)]
            except ValueError:
                raise HTTPException(status_code=422, detail=f"unknown kind {kind!r}")
        conditions = [condition] if condition is not None else None
        with session.lock:
            cfg = session.current
            moves = _enumerate_with_cap(cfg, kinds, conditions, productive)
            start = page * page_size
            chunk = moves[start : start + page_size]
            return {
                "session_id": session_id,
                "digest": config_digest(cfg),
                "page": page,
                "page_size": page_size,
                "total": len(moves),
                "truncated": len(moves) >= MOVE_ENUMERATION_CAP,
                "moves": [_move_payload(cfg, mv, session.model) for mv in chunk],
            }

    @app.post("/sessions/{session_id}/moves/{digest}")
    def apply_by_digest(session_id: str, digest: str):
        session = store.get(session_id)
        with session.lock:
            cfg = session.current
            found = None
            for mv in enumerate_moves(cfg):
                if move_digest(cfg, mv) == digest:
                    found = mv
                    break
            if found is None:
                raise HTTPException(
                    status_code=409,
                    detail="stale move: digest not found against the current configuration",
                )
            new_cfg = apply_move(cfg, found)
            session.history.append((found, cfg))
            session.current = new_cfg
            return _state_payload(session)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if not session.history:
                raise HTTPException(status_code=409, detail="nothing to undo")
            _, prev = session.history.pop()
            session.current = prev
            return _state_payload(session)

    @app.get("/sessions/{session_id}/trace")
    def export_trace(session_id: str):
        session = store.get(session_id)
        with session.lock:
            # digests are recomputed by replaying from the initial
            # configuration, which is exactly what the CLI replayer does
            trace = Trace(GameConfig(session.model.model, session.initial.morphism))
            cfg = trace.initial
            for mv, _prev in session.history:
                cfg = apply_move(cfg, _rebind(mv, cfg))
                trace.steps.append(TraceStep(config_digest(cfg), move=mv))
            return trace_document_envelope(session.model, session.initial, trace)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _rebind(mv: Move, cfg: GameConfig) -> Move:
    from .reflection import rebind_move

    return rebind_move(mv, cfg)
