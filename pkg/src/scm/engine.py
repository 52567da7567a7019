"""The engine facade: one entry point wiring encoding, valuation, the two
memory stores, and the sleep cycle together per message."""
from __future__ import annotations

import json
import logging
import random
import threading
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from . import sleep_cycle
from .encoding import HashEmbedder, RuleBasedExtractor, sentiment
from .errors import BusyError, InvalidArgumentError
from .long_term_memory import MemoryGraph, RetrievalHit
from .model import (
    Clock,
    Concept,
    ConceptType,
    EngineConfig,
    Episode,
    WallClock,
    ValueVector,
    make_concept_id,
    mean_value,
    normalize_label,
    value_for_importance,
)
from .self_model import init_self, introspect
from .valuation import SessionGoal, composite_importance, task_relevance
from .working_memory import WorkingMemory

logger = logging.getLogger(__name__)

# Type priority when an extracted relation endpoint label is ambiguous.
_TYPE_PRIORITY = {t: i for i, t in enumerate(ConceptType)}


@dataclass
class TaggedConcept:
    concept_id: str
    label: str
    ctype: ConceptType
    value: ValueVector
    importance: float

    def as_dict(self) -> dict:
        return {
            "concept_id": self.concept_id,
            "label": self.label,
            "ctype": self.ctype.value,
            "value": self.value.as_dict(),
            "importance": self.importance,
        }


@dataclass
class IngestReport:
    concept_ids: list[str] = field(default_factory=list)
    tagged: list[TaggedConcept] = field(default_factory=list)
    new_relations: list[tuple[str, str, str]] = field(default_factory=list)
    episode_id: str | None = None
    evicted_episode_id: str | None = None
    sleep_report: sleep_cycle.SleepReport | None = None
    degraded: bool = False

    def as_dict(self) -> dict:
        return {
            "concept_ids": self.concept_ids,
            "tagged": [t.as_dict() for t in self.tagged],
            "new_relations": [list(r) for r in self.new_relations],
            "episode_id": self.episode_id,
            "evicted_episode_id": self.evicted_episode_id,
            "sleep_report": self.sleep_report.as_dict() if self.sleep_report else None,
            "degraded": self.degraded,
        }


class MemoryEngine:
    """Wake-phase pipeline plus sleep orchestration over one shared state."""

    def __init__(
        self,
        config: EngineConfig | None = None,
        clock: Clock | None = None,
        extractor=None,
        embedder=None,
        audit_log_path: str | Path | None = None,
    ):
        self.config = (config or EngineConfig()).validate()
        self.clock = clock or WallClock()
        self.embedder = embedder or HashEmbedder(self.config.embedding_dim)
        self.extractor = extractor or RuleBasedExtractor()
        self.audit_log_path = Path(audit_log_path) if audit_log_path else None
        capacity = 10**9 if self.config.is_disabled("wm_limit") else self.config.wm_capacity
        self.wm = WorkingMemory(capacity, self.config.tagger_weights)
        self.ltm = MemoryGraph(self.config, self.embedder)
        now = self.clock.now()
        self.self_state = init_self(self.ltm, self.config, self.embedder, now)
        self.goal: SessionGoal | None = None
        self.last_sleep_time = now
        self._lock = threading.RLock()
        self._sleeping = False
        self._inject_counter = 0

    # ----------------------------------------------------------------- wake
    @property
    def is_sleeping(self) -> bool:
        return self._sleeping

    def process_message(self, text: str) -> IngestReport:
        """Run the full wake pipeline for one utterance."""
        with self._lock:
            if self._sleeping:
                raise BusyError("a sleep cycle is in progress")
            now = self.clock.now()
            report = IngestReport()
            prior_prefs = {
                normalize_label(c.label): c.value.emotional
                for c in self.ltm.concepts()
                if c.ctype is ConceptType.PREFERENCE
            }
            extraction = self.extractor.extract(text, prior_prefs)
            report.degraded = extraction.degraded or getattr(self.embedder, "degraded", False)

            tagger_off = self.config.is_disabled("tagger")
            fresh: list[Concept] = []
            label_to_id: dict[str, str] = {}
            for ex in extraction.concepts:
                cid = make_concept_id(ex.label, ex.ctype)
                embed_text = f"{ex.label} {ex.description}" if ex.description else ex.label
                embedding = self.embedder.embed(embed_text)
                if tagger_off:
                    value = value_for_importance(0.5, self.config.tagger_weights)
                else:
                    best = self.ltm.max_cosine(embedding)
                    nov = 1.0 if best is None else min(1.0, max(0.0, 1.0 - best))
                    emo = sentiment(ex.description or ex.label, ex.sentiment_hint)
                    task = task_relevance(embedding, self.goal)
                    value = ValueVector(novelty=nov, emotional=emo, task=task, repetition=0.0)
                importance = composite_importance(value, self.config.tagger_weights)
                fresh.append(
                    Concept(
                        id=cid,
                        label=ex.label,
                        ctype=ex.ctype,
                        description=ex.description,
                        embedding=embedding,
                        value=value,
                        importance=importance,
                        created_at=now,
                        last_access=now,
                    )
                )
                label_to_id.setdefault(normalize_label(ex.label), cid)

            seen_ids = set()
            for concept in fresh:
                if concept.id in seen_ids:
                    continue
                seen_ids.add(concept.id)
                self.ltm.upsert_concept(concept, now)
                report.concept_ids.append(concept.id)
                stored = self.ltm.get(concept.id)
                report.tagged.append(
                    TaggedConcept(concept.id, stored.label, stored.ctype, concept.value, concept.importance)
                )

            for rel in extraction.relations:
                src = self._resolve_label(rel.src_label, label_to_id)
                dst = self._resolve_label(rel.dst_label, label_to_id)
                if src is None or dst is None:
                    logger.debug("dropping relation with unresolved endpoint: %s", rel)
                    continue
                delta = self.config.eta * self.ltm.get(src).importance * self.ltm.get(dst).importance
                self.ltm.add_or_strengthen(src, dst, rel.predicate, delta, now)
                report.new_relations.append((src, rel.predicate.value, dst))

            if report.concept_ids:
                values = [t.value for t in report.tagged]
                ep_value = mean_value(values)
                episode = Episode(
                    eid=f"ep-{self.self_state.messages_processed + 1:06d}",
                    timestamp=now,
                    concept_ids=tuple(report.concept_ids),
                    text=text,
                    value=ep_value,
                    importance=composite_importance(ep_value, self.config.tagger_weights),
                    last_access=now,
                )
                evicted = self.wm.admit(episode)
                report.episode_id = episode.eid
                report.evicted_episode_id = evicted.eid if evicted else None

            self.self_state.messages_processed += 1
            self.goal = SessionGoal(text, self.embedder.embed(text))

            trigger = sleep_cycle.should_sleep(
                self.wm, self.ltm, self.last_sleep_time, now, self.config
            )
            if trigger is not None:
                report.sleep_report = self.run_sleep_cycle(trigger)
            return report

    def _resolve_label(self, label: str, batch: dict[str, str]) -> str | None:
        norm = normalize_label(label)
        cid = batch.get(norm)
        if cid is not None:
            return cid
        matches = self.ltm.find_by_label(label)
        if not matches:
            return None
        matches.sort(key=lambda c: (_TYPE_PRIORITY[c.ctype], c.id))
        return matches[0].id

    def query(self, text: str, k: int = 3) -> list[RetrievalHit]:
        """Retrieve from long-term memory, marking returned concepts accessed."""
        with self._lock:
            if self._sleeping:
                raise BusyError("a sleep cycle is in progress")
            if not text or not text.strip():
                raise InvalidArgumentError("query text must be non-empty")
            return self.ltm.retrieve(text, k, self.clock.now())

    def set_goal(self, text: str) -> None:
        with self._lock:
            self.goal = SessionGoal(text, self.embedder.embed(text))

    def introspect(self, query: str) -> str:
        return introspect(self.self_state, self.ltm, query)

    # ---------------------------------------------------------------- sleep
    def maybe_sleep(self) -> sleep_cycle.SleepReport | None:
        """Run a cycle if any trigger currently fires."""
        with self._lock:
            trigger = sleep_cycle.should_sleep(
                self.wm, self.ltm, self.last_sleep_time, self.clock.now(), self.config
            )
            if trigger is None:
                return None
            return self.run_sleep_cycle(trigger)

    def force_sleep(self) -> sleep_cycle.SleepReport:
        return self.run_sleep_cycle(sleep_cycle.SleepTrigger("manual", 0.0, 0.0))

    def run_sleep_cycle(self, trigger: sleep_cycle.SleepTrigger) -> sleep_cycle.SleepReport:
        """Consolidate, dream, forget, then record the cycle itself."""
        with self._lock:
            if self._sleeping:
                raise BusyError("a sleep cycle is already running")
            self._sleeping = True
            try:
                now = self.clock.now()
                report = sleep_cycle.SleepReport(trigger=trigger, started_at=now)

                pairs, downscaled, transferred = sleep_cycle.nrem_consolidate(
                    self.wm, self.ltm, self.config, now
                )
                report.pairs_strengthened = pairs
                report.edges_downscaled = downscaled
                report.episodes_transferred = len(transferred)

                if not self.config.is_disabled("rem"):
                    rng = random.Random(
                        f"{self.config.rng_seed}:{self.self_state.sleep_cycles_completed}"
                    )
                    attempted, integrated, paths = sleep_cycle.rem_dream(
                        self.ltm, transferred, rng, self.config, now
                    )
                    report.dreams_attempted = attempted
                    report.dreams_integrated = integrated
                    report.dream_paths = paths

                if not self.config.is_disabled("forget"):
                    theta_f, removed = sleep_cycle.forget(self.ltm, now, self.config)
                    report.theta_f = theta_f
                    report.forgotten_ids = removed
                    report.concepts_forgotten = len(removed)

                self.self_state.sleep_cycles_completed += 1
                self.self_state.dreams_generated += report.dreams_integrated

                self_id = self.self_state.self_concept_id
                if self_id is not None and self_id in self.ltm:
                    self_concept = self.ltm.get(self_id)
                    cycle_no = self.self_state.sleep_cycles_completed
                    text = (
                        f"sleep cycle {cycle_no}: transferred {report.episodes_transferred} "
                        f"episodes, strengthened {report.pairs_strengthened} pairs, integrated "
                        f"{report.dreams_integrated} dreams, forgot {report.concepts_forgotten} concepts"
                    )
                    self.wm.admit(
                        Episode(
                            eid=f"sleep-{cycle_no:06d}",
                            timestamp=now,
                            concept_ids=(self_id,),
                            text=text,
                            value=self_concept.value,
                            importance=composite_importance(
                                self_concept.value, self.config.tagger_weights
                            ),
                            last_access=now,
                        )
                    )

                report.ended_at = self.clock.now()
                self.last_sleep_time = report.ended_at
                self._append_audit(report)
                return report
            finally:
                self._sleeping = False

    def _append_audit(self, report: sleep_cycle.SleepReport) -> None:
        if self.audit_log_path is None:
            return
        self.audit_log_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.audit_log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(report.as_dict(), sort_keys=True) + "\n")

    # ------------------------------------------------------------ utilities
    def advance_clock(self, hours: float) -> datetime:
        with self._lock:
            return self.clock.advance(hours)

    def inject_concept(
        self,
        label: str,
        ctype: ConceptType = ConceptType.FACT,
        importance: float = 0.3,
        protected: bool = False,
        description: str = "",
    ) -> str:
        """Insert a concept with a pinned importance; benchmark scaffolding."""
        with self._lock:
            now = self.clock.now()
            if self.config.is_disabled("tagger"):
                importance = 0.5
            value = value_for_importance(importance, self.config.tagger_weights)
            concept = Concept(
                id=make_concept_id(label, ctype),
                label=label,
                ctype=ctype,
                description=description,
                embedding=self.embedder.embed(label),
                value=value,
                importance=composite_importance(value, self.config.tagger_weights),
                created_at=now,
                last_access=now,
                protected=protected,
            )
            return self.ltm.upsert_concept(concept, now)

    def inject_episode(self, concept_ids: list[str], text: str = "") -> Episode:
        """Admit a synthetic episode over existing concepts."""
        with self._lock:
            now = self.clock.now()
            values = [self.ltm.get(cid).value for cid in concept_ids]
            ep_value = mean_value(values)
            self._inject_counter += 1
            episode = Episode(
                eid=f"inj-{self._inject_counter:06d}",
                timestamp=now,
                concept_ids=tuple(concept_ids),
                text=text,
                value=ep_value,
                importance=composite_importance(ep_value, self.config.tagger_weights),
                last_access=now,
            )
            self.wm.admit(episode)
            return episode

    def stats(self) -> dict:
        with self._lock:
            return {
                "concepts": self.ltm.node_count,
                "edges": self.ltm.edge_count,
                "wm_size": len(self.wm),
                "entropy": self.wm.entropy(),
                "conflict_density": self.ltm.conflict_density(),
                "last_sleep": self.last_sleep_time.isoformat(),
                **self.self_state.counters(),
            }
