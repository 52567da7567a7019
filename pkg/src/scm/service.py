"""HTTP/JSON API over one engine instance.

All engine access funnels through the engine's internal lock; mutating
requests therefore observe a total order. Requests arriving while a sleep
cycle runs are refused with 409 rather than queued.
"""
from __future__ import annotations

import logging
import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engine import MemoryEngine
from .errors import (
    BusyError,
    ConfigurationError,
    CorruptSnapshotError,
    InvalidArgumentError,
    MemoryError_,
    NotFoundError,
    ProtectedConceptError,
    UnsupportedVersionError,
)
from .model import EngineConfig, SimulatedClock, WallClock
from .persistence import DEFAULT_SNAPSHOT_PATH, load, save

logger = logging.getLogger(__name__)

_STATUS = {
    InvalidArgumentError: 400,
    ProtectedConceptError: 403,
    NotFoundError: 404,
    BusyError: 409,
    UnsupportedVersionError: 422,
    CorruptSnapshotError: 422,
    ConfigurationError: 422,
}


class MessageBody(BaseModel):
    text: str


class SleepBody(BaseModel):
    force: bool = False


class SnapshotBody(BaseModel):
    path: str | None = None


class AdvanceBody(BaseModel):
    hours: float


def engine_from_env() -> MemoryEngine:
    from .encoding import embedder_from_env, extractor_from_env

    simulated = os.environ.get("SCM_SIMULATED_CLOCK", "false").lower() in ("1", "true", "yes")
    clock = SimulatedClock() if simulated else WallClock()
    snapshot = os.environ.get("SCM_SNAPSHOT_PATH")
    audit = os.environ.get("SCM_AUDIT_LOG_PATH")
    if snapshot and os.path.exists(snapshot):
        engine = load(snapshot, clock=clock)
        engine.audit_log_path = Path(audit) if audit else None
        return engine
    config = EngineConfig(embedding_dim=int(os.environ.get("EMBEDDING_DIM", "384")))
    return MemoryEngine(
        config,
        clock=clock,
        extractor=extractor_from_env(),
        embedder=embedder_from_env(config.embedding_dim),
        audit_log_path=audit,
    )


def create_app(engine: MemoryEngine | None = None) -> FastAPI:
    app = FastAPI(title="scm", version="0.1.0")
    app.state.engine = engine or engine_from_env()

    origins = os.environ.get("SCM_CORS_ORIGIN", "*")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[o.strip() for o in origins.split(",")],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(MemoryError_)
    async def engine_error(request: Request, exc: MemoryError_):
        status = _STATUS.get(type(exc), 500)
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    def eng() -> MemoryEngine:
        return app.state.engine

    def reject_if_sleeping():
        if eng().is_sleeping:
            raise BusyError("a sleep cycle is in progress")

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.post("/v1/messages")
    def post_message(body: MessageBody):
        reject_if_sleeping()
        report = eng().process_message(body.text)
        return report.as_dict()

    @app.get("/v1/query")
    def get_query(q: str, k: int = 3):
        reject_if_sleeping()
        hits = eng().query(q, k)
        engine = eng()
        out = []
        for h in hits:
            concept = engine.ltm.get(h.concept_id)
            row = h.as_dict()
            row["label"] = concept.label
            row["ctype"] = concept.ctype.value
            out.append(row)
        return {"hits": out}

    @app.post("/v1/sleep")
    def post_sleep(body: SleepBody):
        reject_if_sleeping()
        if body.force:
            report = eng().force_sleep()
        else:
            report = eng().maybe_sleep()
            if report is None:
                return {"slept": False, "report": None}
        return {"slept": True, "report": report.as_dict()}

    @app.get("/v1/self")
    def get_self(q: str = "summary"):
        engine = eng()
        return {
            "report": engine.introspect(q),
            "counters": engine.self_state.counters(),
            "capabilities": [
                engine.ltm.get(cid).label
                for cid in engine.self_state.capability_ids
                if cid in engine.ltm
            ],
        }

    @app.get("/v1/stats")
    def get_stats():
        return eng().stats()

    @app.get("/v1/graph")
    def get_graph(limit: int = 100):
        engine = eng()
        chosen = sorted(
            engine.ltm.concepts(), key=lambda c: (-c.importance, c.id)
        )[: max(limit, 0)]
        ids = {c.id for c in chosen}
        nodes = [
            {
                "id": c.id,
                "label": c.label,
                "ctype": c.ctype.value,
                "importance": c.importance,
                "protected": c.protected,
                "access_count": c.access_count,
            }
            for c in chosen
        ]
        edges = [
            {
                "src": r.src,
                "dst": r.dst,
                "predicate": r.predicate.value,
                "strength": r.strength,
            }
            for r in engine.ltm.relations()
            if r.src in ids and r.dst in ids
        ]
        return {"nodes": nodes, "edges": edges}

    @app.post("/v1/snapshot/save")
    def post_save(body: SnapshotBody):
        reject_if_sleeping()
        path = body.path or os.environ.get("SCM_SNAPSHOT_PATH", DEFAULT_SNAPSHOT_PATH)
        written = save(eng(), path)
        return {"path": str(path), "bytes": written}

    @app.post("/v1/snapshot/load")
    def post_load(body: SnapshotBody):
        reject_if_sleeping()
        path = body.path or os.environ.get("SCM_SNAPSHOT_PATH", DEFAULT_SNAPSHOT_PATH)
        old = eng()
        replacement = load(path, clock=old.clock if old.clock.simulated else None)
        replacement.audit_log_path = old.audit_log_path
        app.state.engine = replacement
        return {"path": str(path), "stats": replacement.stats()}

    @app.post("/v1/clock/advance")
    def post_advance(body: AdvanceBody):
        reject_if_sleeping()
        if not eng().clock.simulated:
            raise InvalidArgumentError("clock advance requires SCM_SIMULATED_CLOCK=true")
        now = eng().advance_clock(body.hours)
        return {"now": now.isoformat()}

    return app


def serve(host: str = "0.0.0.0", port: int = 8750, engine: MemoryEngine | None = None):
    import uvicorn

    app = create_app(engine)
    uvicorn.run(app, host=host, port=port, log_level="info")
