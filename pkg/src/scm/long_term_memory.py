"""Directed typed concept graph with fused retrieval.

Search is an exhaustive scan over a cached embedding matrix: deterministic,
oracle-checkable, and comfortably inside the latency budget at benchmark
scales (hundreds to a few thousand concepts).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime

import numpy as np

from .errors import InvalidArgumentError, NotFoundError, ProtectedConceptError
from .model import Concept, EngineConfig, Predicate, Relation, ValueVector
from .valuation import composite_importance


@dataclass(frozen=True)
class RetrievalHit:
    concept_id: str
    fused_score: float
    semantic: float
    importance: float
    graph_proximity: float

    def as_dict(self) -> dict:
        return {
            "concept_id": self.concept_id,
            "fused_score": self.fused_score,
            "semantic": self.semantic,
            "importance": self.importance,
            "graph_proximity": self.graph_proximity,
        }


class MemoryGraph:
    """Long-term memory: concepts as nodes, typed weighted relations as edges."""

    def __init__(self, config: EngineConfig, embedder=None):
        self.config = config
        self.embedder = embedder
        self._concepts: dict[str, Concept] = {}
        self._edges: dict[tuple[str, str, str], Relation] = {}
        self._out: dict[str, dict[tuple[str, str], Relation]] = {}
        self._in: dict[str, dict[tuple[str, str], Relation]] = {}
        self._contradicts = 0
        self._max_access = 0
        # Embedding matrix cache; embeddings never mutate after insert, so
        # only node insertion/removal invalidates it.
        self._matrix: np.ndarray | None = None
        self._matrix_ids: list[str] = []
        self._created_epoch: dict[str, float] = {}

    # ------------------------------------------------------------------ size
    def __len__(self) -> int:
        return len(self._concepts)

    @property
    def node_count(self) -> int:
        return len(self._concepts)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def contradicts_count(self) -> int:
        return self._contradicts

    @property
    def max_access_count(self) -> int:
        return self._max_access

    def __contains__(self, cid: str) -> bool:
        return cid in self._concepts

    def get(self, cid: str) -> Concept:
        try:
            return self._concepts[cid]
        except KeyError:
            raise NotFoundError(f"no concept {cid!r}") from None

    def concepts(self) -> list[Concept]:
        return list(self._concepts.values())

    def relations(self) -> list[Relation]:
        return list(self._edges.values())

    def unprotected(self) -> list[Concept]:
        return [c for c in self._concepts.values() if not c.protected]

    def find_by_label(self, label: str) -> list[Concept]:
        from .model import normalize_label

        norm = normalize_label(label)
        return [c for c in self._concepts.values() if normalize_label(c.label) == norm]

    def connection_strength(self, cid: str) -> float:
        """Sum of incident edge strengths; a derived statistic only."""
        self.get(cid)
        total = 0.0
        seen = set()
        for adj in (self._out.get(cid, {}), self._in.get(cid, {})):
            for rel in adj.values():
                key = (rel.src, rel.dst, rel.predicate.value)
                if key not in seen:
                    seen.add(key)
                    total += rel.strength
        return total

    # ------------------------------------------------------------- mutations
    def upsert_concept(self, concept: Concept, now: datetime) -> str:
        """Insert, or merge into the stored concept with the same id.

        Merge keeps the earliest creation time, sums access counts, keeps
        the larger magnitude per value dimension, recomputes importance,
        and refreshes last_access.
        """
        cid = concept.id
        existing = self._concepts.get(cid)
        if existing is None:
            self._concepts[cid] = concept
            self._created_epoch[cid] = concept.created_at.timestamp()
            self._max_access = max(self._max_access, concept.access_count)
            self._matrix = None
            return cid

        merged_value = existing.value
        for dim in ("novelty", "emotional", "task", "repetition"):
            new = getattr(concept.value, dim)
            if abs(new) > abs(getattr(merged_value, dim)):
                merged_value = replace(merged_value, **{dim: new})
        existing.created_at = min(existing.created_at, concept.created_at)
        self._created_epoch[cid] = existing.created_at.timestamp()
        existing.access_count = existing.access_count + concept.access_count
        existing.value = merged_value
        if not existing.protected and not self.config.is_disabled("tagger"):
            existing.importance = composite_importance(merged_value, self.config.tagger_weights)
        existing.last_access = now
        self._max_access = max(self._max_access, existing.access_count)
        return cid

    def add_or_strengthen(self, src: str, dst: str, predicate: Predicate, delta: float, now: datetime) -> float:
        """Create the edge with strength=delta, or add delta to it."""
        if delta < 0:
            raise InvalidArgumentError("strength delta must be >= 0")
        if src not in self._concepts:
            raise NotFoundError(f"no concept {src!r}")
        if dst not in self._concepts:
            raise NotFoundError(f"no concept {dst!r}")
        key = (src, dst, predicate.value)
        rel = self._edges.get(key)
        if rel is None:
            rel = Relation(src, dst, predicate, delta, now)
            self._edges[key] = rel
            self._out.setdefault(src, {})[(dst, predicate.value)] = rel
            self._in.setdefault(dst, {})[(src, predicate.value)] = rel
            if predicate is Predicate.CONTRADICTS:
                self._contradicts += 1
        else:
            rel = replace(rel, strength=rel.strength + delta)
            self._set_edge(key, rel)
        return rel.strength

    def _set_edge(self, key: tuple[str, str, str], rel: Relation) -> None:
        self._edges[key] = rel
        self._out[rel.src][(rel.dst, rel.predicate.value)] = rel
        self._in[rel.dst][(rel.src, rel.predicate.value)] = rel

    def scale_strengths(self, factor: float) -> int:
        """Multiply every edge strength by factor; returns edges touched."""
        if factor < 0:
            raise InvalidArgumentError("scale factor must be >= 0")
        for key, rel in self._edges.items():
            self._set_edge(key, replace(rel, strength=rel.strength * factor))
        return len(self._edges)

    def out_edges(self, node: str) -> list[tuple[str, Predicate, float]]:
        """Outgoing edges of a node as (dst, predicate, strength) triples."""
        return [
            (rel.dst, rel.predicate, rel.strength)
            for rel in self._out.get(node, {}).values()
        ]

    def has_edge_between(self, a: str, b: str) -> bool:
        """True if any edge, either direction, any predicate, joins a and b."""
        for (dst, _p) in self._out.get(a, {}):
            if dst == b:
                return True
        for (src, _p) in self._in.get(a, {}):
            if src == b:
                return True
        return False

    def has_contradicts_between(self, a: str, b: str) -> bool:
        return ((a, b, Predicate.CONTRADICTS.value) in self._edges) or (
            (b, a, Predicate.CONTRADICTS.value) in self._edges
        )

    def remove_concept(self, cid: str) -> int:
        """Remove a node and every incident edge; returns removed edge count."""
        concept = self.get(cid)
        if concept.protected:
            raise ProtectedConceptError(f"concept {concept.label!r} is protected")
        keys = {(r.src, r.dst, r.predicate.value) for r in self._out.get(cid, {}).values()}
        keys |= {(r.src, r.dst, r.predicate.value) for r in self._in.get(cid, {}).values()}
        for key in keys:
            rel = self._edges.pop(key)
            self._out[rel.src].pop((rel.dst, rel.predicate.value), None)
            self._in[rel.dst].pop((rel.src, rel.predicate.value), None)
            if rel.predicate is Predicate.CONTRADICTS:
                self._contradicts -= 1
        self._out.pop(cid, None)
        self._in.pop(cid, None)
        del self._concepts[cid]
        del self._created_epoch[cid]
        self._matrix = None
        self._max_access = max((c.access_count for c in self._concepts.values()), default=0)
        return len(keys)

    def mark_accessed(self, cid: str, now: datetime) -> Concept:
        """Record a retrieval hit: bump counters and refresh importance."""
        concept = self.get(cid)
        concept.access_count += 1
        concept.last_access = now
        if concept.access_count > self._max_access:
            self._max_access = concept.access_count
        if not concept.protected and not self.config.is_disabled("tagger"):
            v = concept.value
            value = ValueVector(
                v.novelty,
                v.emotional,
                v.task,
                concept.access_count / (self._max_access + 1),
            )
            concept.value = value
            concept.importance = composite_importance(value, self.config.tagger_weights)
        return concept

    def refresh_last_access(self, cid: str, now: datetime) -> None:
        concept = self.get(cid)
        if now > concept.last_access:
            concept.last_access = now

    # ------------------------------------------------------------- retrieval
    def _ensure_matrix(self) -> None:
        if self._matrix is None:
            self._matrix_ids = list(self._concepts.keys())
            if self._matrix_ids:
                self._matrix = np.stack(
                    [self._concepts[c].embedding for c in self._matrix_ids]
                )
            else:
                self._matrix = np.empty((0, self.config.embedding_dim))

    def max_cosine(self, embedding: np.ndarray) -> float | None:
        """Best cosine match against every stored embedding; None when empty."""
        if not self._concepts:
            return None
        self._ensure_matrix()
        norm = float(np.linalg.norm(embedding))
        if norm == 0.0:
            return 0.0
        return float(np.max(self._matrix @ (embedding / norm)))

    def semantic_search(self, query: np.ndarray, k: int) -> list[tuple[str, float]]:
        """Top-k concepts by cosine; deterministic tie-breaks.

        Ties resolve by higher access count, then newer creation time, then
        ascending id.
        """
        if k < 1:
            raise InvalidArgumentError("k must be >= 1")
        if not self._concepts:
            return []
        self._ensure_matrix()
        qq = float(query @ query)
        if qq == 0.0:
            cosines = np.zeros(len(self._matrix_ids))
        else:
            cosines = self._matrix @ (query / (qq**0.5))
        n = len(self._matrix_ids)
        m = min(k, n)
        if m < n and n > 64:
            cut = np.partition(cosines, n - m)[n - m]
            idx = np.nonzero(cosines >= cut)[0]
        else:
            idx = range(n)
        ids = self._matrix_ids
        concepts = self._concepts
        epochs = self._created_epoch
        ranked = sorted(
            (-cosines[i], -concepts[ids[i]].access_count, -epochs[ids[i]], ids[i])
            for i in idx
        )[:m]
        return [(cid, -neg_cos) for neg_cos, _a, _t, cid in ranked]

    def neighbors(self, seed: str, max_hops: int) -> list[tuple[str, int]]:
        """Breadth-first association search over non-contradicts edges.

        Traverses both edge directions; each concept is reported once at its
        minimum hop distance, ordered by (hops, id). The seed is excluded.
        """
        self.get(seed)
        if max_hops < 1:
            return []
        dist = {seed: 0}
        frontier = [seed]
        for hop in range(1, max_hops + 1):
            nxt = []
            for node in frontier:
                for (dst, pred) in self._out.get(node, {}):
                    if pred != Predicate.CONTRADICTS.value and dst not in dist:
                        dist[dst] = hop
                        nxt.append(dst)
                for (src, pred) in self._in.get(node, {}):
                    if pred != Predicate.CONTRADICTS.value and src not in dist:
                        dist[src] = hop
                        nxt.append(src)
            frontier = nxt
            if not frontier:
                break
        del dist[seed]
        return sorted(dist.items(), key=lambda kv: (kv[1], kv[0]))

    def retrieve(self, query_text: str, k: int, now: datetime) -> list[RetrievalHit]:
        """Fused retrieval: semantic + importance + graph proximity.

        Candidates are the top-2k semantic hits plus the 1-hop neighborhoods
        of the top-3 semantic seeds. Returned concepts are marked accessed,
        which is what lets queried facts survive forgetting.
        """
        if k < 1:
            raise InvalidArgumentError("k must be >= 1")
        if self.embedder is None:
            raise InvalidArgumentError("retrieval requires an embedder")
        if not self._concepts:
            return []
        query = self.embedder.embed(query_text)
        qq = float(query @ query)
        q_unit = query if qq == 0.0 else query / (qq**0.5)
        sem = self.semantic_search(q_unit, 2 * k)
        sem_scores = dict(sem)
        proximity: dict[str, float] = {}
        for seed, _score in sem[:3]:
            proximity[seed] = 1.0
        contradicts = Predicate.CONTRADICTS.value
        for seed, _score in sem[:3]:
            for (dst, pred) in self._out.get(seed, {}):
                if pred != contradicts and proximity.get(dst, 0.0) < 0.5:
                    proximity[dst] = 0.5
            for (src, pred) in self._in.get(seed, {}):
                if pred != contradicts and proximity.get(src, 0.0) < 0.5:
                    proximity[src] = 0.5
        candidates = set(sem_scores) | set(proximity)
        w_sem, w_imp, w_graph = self.config.fusion_weights
        scored = []
        for cid in candidates:
            concept = self._concepts[cid]
            semantic = sem_scores.get(cid)
            if semantic is None:
                # stored embeddings are unit-or-null, so the dot suffices
                semantic = float(q_unit @ concept.embedding)
            prox = proximity.get(cid, 0.0)
            fused = w_sem * semantic + w_imp * concept.importance + w_graph * prox
            scored.append(
                (
                    -fused,
                    -concept.access_count,
                    -self._created_epoch[cid],
                    cid,
                    RetrievalHit(cid, fused, semantic, concept.importance, prox),
                )
            )
        scored.sort(key=lambda row: row[:4])
        hits = [row[4] for row in scored[:k]]
        for hit in hits:
            self.mark_accessed(hit.concept_id, now)
        return hits

    # ------------------------------------------------------------ statistics
    def conflict_density(self) -> float:
        if not self._edges:
            return 0.0
        return self._contradicts / len(self._edges)

    def validate_integrity(self) -> None:
        """Full-scan invariant check; raises on any violation."""
        for (src, dst, pred), rel in self._edges.items():
            if src not in self._concepts or dst not in self._concepts:
                raise InvalidArgumentError(f"edge {(src, dst, pred)} references a missing concept")
            if rel.strength < 0:
                raise InvalidArgumentError(f"edge {(src, dst, pred)} has negative strength")
        actual_contra = sum(
            1 for rel in self._edges.values() if rel.predicate is Predicate.CONTRADICTS
        )
        if actual_contra != self._contradicts:
            raise InvalidArgumentError("cached contradicts count is stale")
