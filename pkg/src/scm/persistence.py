"""Versioned snapshot save/load for the complete engine state.

Snapshots are canonical JSON (sorted keys, compact separators, shortest
round-trip float representation) so identical states produce identical
bytes and every float survives save/load bit-exactly. Writes are atomic:
a temp file in the target directory is renamed over the destination.
"""
from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import CorruptSnapshotError, NotFoundError, UnsupportedVersionError
from .model import (
    Clock,
    Concept,
    ConceptType,
    EngineConfig,
    Episode,
    Predicate,
    Relation,
    SimulatedClock,
    ValueVector,
    WallClock,
    check_embedding,
)
from .valuation import SessionGoal

SNAPSHOT_VERSION = 1

DEFAULT_SNAPSHOT_PATH = "./scm_memory.json"


def _concept_to_dict(c: Concept) -> dict:
    return {
        "id": c.id,
        "label": c.label,
        "ctype": c.ctype.value,
        "description": c.description,
        "embedding": [float(x) for x in c.embedding],
        "value": c.value.as_dict(),
        "importance": c.importance,
        "created_at": c.created_at.isoformat(),
        "last_access": c.last_access.isoformat(),
        "access_count": c.access_count,
        "protected": c.protected,
    }


def _concept_from_dict(d: dict, dim: int) -> Concept:
    return Concept(
        id=d["id"],
        label=d["label"],
        ctype=ConceptType(d["ctype"]),
        description=d["description"],
        embedding=check_embedding(np.array(d["embedding"], dtype=np.float64), dim),
        value=ValueVector.from_dict(d["value"]),
        importance=float(d["importance"]),
        created_at=datetime.fromisoformat(d["created_at"]),
        last_access=datetime.fromisoformat(d["last_access"]),
        access_count=int(d["access_count"]),
        protected=bool(d["protected"]),
    )


def _relation_to_dict(r: Relation) -> dict:
    return {
        "src": r.src,
        "dst": r.dst,
        "predicate": r.predicate.value,
        "strength": r.strength,
        "created_at": r.created_at.isoformat(),
    }


def _episode_to_dict(e: Episode) -> dict:
    return {
        "eid": e.eid,
        "timestamp": e.timestamp.isoformat(),
        "concept_ids": list(e.concept_ids),
        "text": e.text,
        "value": e.value.as_dict(),
        "importance": e.importance,
        "last_access": e.last_access.isoformat(),
        "access_count": e.access_count,
    }


def _episode_from_dict(d: dict) -> Episode:
    return Episode(
        eid=d["eid"],
        timestamp=datetime.fromisoformat(d["timestamp"]),
        concept_ids=tuple(d["concept_ids"]),
        text=d["text"],
        value=ValueVector.from_dict(d["value"]),
        importance=float(d["importance"]),
        last_access=datetime.fromisoformat(d["last_access"]),
        access_count=int(d["access_count"]),
    )


def snapshot_dict(engine) -> dict:
    return {
        "version": SNAPSHOT_VERSION,
        "saved_at": engine.clock.now().isoformat(),
        "config": engine.config.as_dict(),
        "counters": engine.self_state.counters(),
        "concepts": [_concept_to_dict(c) for c in engine.ltm.concepts()],
        "relations": [_relation_to_dict(r) for r in engine.ltm.relations()],
        "episodes": [_episode_to_dict(e) for e in engine.wm.episodes],
        "last_sleep_time": engine.last_sleep_time.isoformat(),
        "goal": (
            None
            if engine.goal is None
            else {"text": engine.goal.text, "embedding": [float(x) for x in engine.goal.embedding]}
        ),
    }


def snapshot_bytes(engine) -> bytes:
    doc = json.dumps(snapshot_dict(engine), sort_keys=True, separators=(",", ":"))
    return doc.encode("utf-8")


def save(engine, path: str | Path) -> int:
    """Atomically write the engine snapshot; returns bytes written."""
    path = Path(path)
    payload = snapshot_bytes(engine)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".scm-snap-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    return len(payload)


def load(path: str | Path, clock: Clock | None = None):
    """Rebuild a full engine from a snapshot file.

    Missing file, malformed JSON, unknown version, and integrity violations
    raise distinct errors; no partially-loaded engine ever escapes.
    """
    from .engine import MemoryEngine

    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"no snapshot at {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptSnapshotError(f"unreadable snapshot {path}: {exc}") from exc
    if not isinstance(doc, dict) or "version" not in doc:
        raise CorruptSnapshotError(f"snapshot {path} has no version field")
    if doc["version"] != SNAPSHOT_VERSION:
        raise UnsupportedVersionError(
            f"snapshot version {doc['version']} unsupported (expected {SNAPSHOT_VERSION})"
        )
    try:
        config = EngineConfig.from_dict(doc["config"])
        saved_at = datetime.fromisoformat(doc["saved_at"])
        if clock is None:
            clock = WallClock(floor=saved_at)
        elif isinstance(clock, SimulatedClock) and clock.now() < saved_at:
            clock = SimulatedClock(saved_at)
        engine = MemoryEngine(config=config, clock=clock)
        # Replace the self-model scaffold with the persisted state wholesale.
        engine.wm.episodes = []
        engine.ltm = type(engine.ltm)(config, engine.embedder)
        now = saved_at
        for cd in doc["concepts"]:
            engine.ltm.upsert_concept(_concept_from_dict(cd, config.embedding_dim), now)
        for rd in doc["relations"]:
            engine.ltm.add_or_strengthen(
                rd["src"],
                rd["dst"],
                Predicate(rd["predicate"]),
                float(rd["strength"]),
                datetime.fromisoformat(rd["created_at"]),
            )
        for ed in doc["episodes"]:
            engine.wm.episodes.append(_episode_from_dict(ed))
        engine.self_state = init_self_from_snapshot(engine, doc["counters"])
        engine.last_sleep_time = datetime.fromisoformat(doc["last_sleep_time"])
        goal = doc.get("goal")
        if goal is not None:
            engine.goal = SessionGoal(
                goal["text"], np.array(goal["embedding"], dtype=np.float64)
            )
        engine.ltm.validate_integrity()
        _validate_episodes(engine)
    except (UnsupportedVersionError, CorruptSnapshotError):
        raise
    except Exception as exc:
        raise CorruptSnapshotError(f"snapshot {path} failed validation: {exc}") from exc
    return engine


def init_self_from_snapshot(engine, counters: dict):
    from .self_model import init_self

    state = init_self(engine.ltm, engine.config, engine.embedder, engine.clock.now())
    state.messages_processed = int(counters["messages_processed"])
    state.sleep_cycles_completed = int(counters["sleep_cycles_completed"])
    state.dreams_generated = int(counters["dreams_generated"])
    return state


def _validate_episodes(engine) -> None:
    if len(engine.wm) > engine.wm.capacity:
        raise CorruptSnapshotError("episode list exceeds working-memory capacity")
