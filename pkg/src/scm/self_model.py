"""The engine's self-representation: identity node, capabilities, counters."""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .model import Concept, ConceptType, EngineConfig, Predicate, ValueVector, make_concept_id
from .long_term_memory import MemoryGraph

SELF_IMPORTANCE = 0.95

# The pinned self value combines to exactly 0.95 under the default weights.
SELF_VALUE = ValueVector(novelty=1.0, emotional=1.0, task=1.0, repetition=2.0 / 3.0)
CAPABILITY_VALUE = ValueVector(novelty=1.0)

CAPABILITIES = (
    "encode meaning",
    "tag value",
    "hold working memory",
    "store long-term memory",
    "consolidate in NREM",
    "dream in REM",
    "forget intentionally",
    "introspect",
    "persist memory",
    "answer queries",
)


@dataclass
class SelfState:
    self_concept_id: str | None
    capability_ids: list[str] = field(default_factory=list)
    messages_processed: int = 0
    sleep_cycles_completed: int = 0
    dreams_generated: int = 0

    def counters(self) -> dict:
        return {
            "messages_processed": self.messages_processed,
            "sleep_cycles_completed": self.sleep_cycles_completed,
            "dreams_generated": self.dreams_generated,
        }


def init_self(ltm: MemoryGraph, config: EngineConfig, embedder, now: datetime) -> SelfState:
    """Install the protected identity star; idempotent on reload."""
    if config.is_disabled("self"):
        return SelfState(self_concept_id=None)
    self_id = make_concept_id(config.self_label, ConceptType.ABSTRACT)
    if self_id not in ltm:
        ltm.upsert_concept(
            Concept(
                id=self_id,
                label=config.self_label,
                ctype=ConceptType.ABSTRACT,
                description="this memory system itself",
                embedding=embedder.embed(config.self_label),
                value=SELF_VALUE,
                importance=SELF_IMPORTANCE,
                created_at=now,
                last_access=now,
                protected=True,
            ),
            now,
        )
    capability_ids = []
    for label in CAPABILITIES:
        cap_id = make_concept_id(label, ConceptType.ABSTRACT)
        if cap_id not in ltm:
            ltm.upsert_concept(
                Concept(
                    id=cap_id,
                    label=label,
                    ctype=ConceptType.ABSTRACT,
                    description="",
                    embedding=embedder.embed(label),
                    value=CAPABILITY_VALUE,
                    importance=0.3,
                    created_at=now,
                    last_access=now,
                    protected=True,
                ),
                now,
            )
            ltm.add_or_strengthen(self_id, cap_id, Predicate.HAS_PROPERTY, 0.5, now)
        capability_ids.append(cap_id)
    return SelfState(self_concept_id=self_id, capability_ids=capability_ids)


def introspect(state: SelfState, ltm: MemoryGraph, query: str) -> str:
    """Deterministic template answers about the system's own state."""
    q = query.lower()
    concepts = ltm.node_count
    edges = ltm.edge_count
    if "sleep" in q or "slept" in q:
        return (
            f"I have completed {state.sleep_cycles_completed} sleep cycles; "
            f"the last ones consolidated my {concepts} concepts."
        )
    if "dream" in q:
        return (
            f"I have integrated {state.dreams_generated} dreams as new "
            f"associations across {edges} relations."
        )
    if "capab" in q or "can you do" in q or "what can you" in q:
        names = [ltm.get(cid).label for cid in state.capability_ids if cid in ltm]
        return "I can " + ", ".join(names) + "."
    if "memory" in q or "concept" in q or "remember" in q:
        return (
            f"I hold {concepts} concepts linked by {edges} relations, built "
            f"from {state.messages_processed} messages."
        )
    return (
        f"I am a memory system holding {concepts} concepts and {edges} relations. "
        f"I have processed {state.messages_processed} messages, completed "
        f"{state.sleep_cycles_completed} sleep cycles, and generated "
        f"{state.dreams_generated} dreams."
    )
