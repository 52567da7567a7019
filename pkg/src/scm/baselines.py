"""Simplified memory backends used for baseline comparisons.

All four backends answer the same scenario scripts through one interface:
ingest(text), query(text, k) -> list of answer strings, sleep(), size().
"""
from __future__ import annotations

from collections import deque

import numpy as np

from .encoding import HashEmbedder, RuleBasedExtractor
from .engine import MemoryEngine
from .model import ConceptType, EngineConfig, SimulatedClock


class FifoBackend:
    """Last-N raw utterances, no long-term store; recall by substring."""

    name = "fifo"

    def __init__(self, config: EngineConfig | None = None):
        capacity = (config or EngineConfig()).wm_capacity
        self.buffer: deque[str] = deque(maxlen=capacity)

    def ingest(self, text: str) -> None:
        self.buffer.append(text)

    def query(self, text: str, k: int = 3) -> list[str]:
        return list(self.buffer)

    def sleep(self) -> None:
        pass

    def advance(self, hours: float) -> None:
        pass

    def inject_noise(self, labels_importances) -> list[str]:
        return []

    def size(self) -> int:
        return len(self.buffer)


class VectorBackend:
    """Cosine-only retrieval over every ingested concept; never forgets."""

    name = "vector"

    def __init__(self, config: EngineConfig | None = None):
        cfg = config or EngineConfig()
        self.embedder = HashEmbedder(cfg.embedding_dim)
        self.extractor = RuleBasedExtractor()
        self.store: dict[str, np.ndarray] = {}

    def ingest(self, text: str) -> None:
        result = self.extractor.extract(text)
        for c in result.concepts:
            embed_text = f"{c.label} {c.description}" if c.description else c.label
            self.store.setdefault(c.label, self.embedder.embed(embed_text))

    def query(self, text: str, k: int = 3) -> list[str]:
        if not self.store:
            return []
        q = self.embedder.embed(text)
        scored = sorted(
            ((float(np.dot(q, emb)), label) for label, emb in self.store.items()),
            key=lambda row: (-row[0], row[1]),
        )
        return [label for _s, label in scored[:k]]

    def sleep(self) -> None:
        pass

    def advance(self, hours: float) -> None:
        pass

    def inject_noise(self, labels_importances) -> list[str]:
        out = []
        for label, _importance in labels_importances:
            self.store.setdefault(label, self.embedder.embed(label))
            out.append(label)
        return out

    def size(self) -> int:
        return len(self.store)


class EngineBackend:
    """The full engine behind the uniform backend interface."""

    name = "full"

    def __init__(self, config: EngineConfig | None = None):
        self.engine = MemoryEngine(config or EngineConfig(), clock=SimulatedClock())

    def ingest(self, text: str) -> None:
        self.engine.process_message(text)

    def query(self, text: str, k: int = 3) -> list[str]:
        hits = self.engine.query(text, k)
        return [self.engine.ltm.get(h.concept_id).label for h in hits]

    def sleep(self) -> None:
        self.engine.force_sleep()

    def advance(self, hours: float) -> None:
        self.engine.advance_clock(hours)

    def inject_noise(self, labels_importances) -> list[str]:
        return [
            self.engine.inject_concept(label, ConceptType.ABSTRACT, importance)
            for label, importance in labels_importances
        ]

    def size(self) -> int:
        return self.engine.ltm.node_count


class NoForgetBackend(EngineBackend):
    """Full engine with the pruning stage disabled."""

    name = "noforget"

    def __init__(self, config: EngineConfig | None = None):
        cfg = config or EngineConfig()
        doc = cfg.as_dict()
        doc["disabled"] = sorted(set(cfg.disabled) | {"forget"})
        super().__init__(EngineConfig.from_dict(doc))


BACKENDS = {
    "fifo": FifoBackend,
    "vector": VectorBackend,
    "noforget": NoForgetBackend,
    "full": EngineBackend,
}


def make_backend(kind: str, config: EngineConfig | None = None):
    try:
        ctor = BACKENDS[kind]
    except KeyError:
        raise ValueError(f"unknown backend {kind!r} (expected one of {sorted(BACKENDS)})")
    return ctor(config)
