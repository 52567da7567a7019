"""Offline reorganization: consolidation, dreaming, and forgetting.

The cycle runs in a fixed order (pair strengthening, global downscaling,
episode transfer, dream walks, value-based pruning) and is bit-reproducible
for a fixed configuration seed and engine state.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from datetime import datetime

from .model import Episode, EngineConfig, Predicate, hours_between
from .long_term_memory import MemoryGraph
from .working_memory import WorkingMemory


@dataclass(frozen=True)
class SleepTrigger:
    reason: str  # entropy | conflict | time | manual
    measured: float
    threshold: float

    def as_dict(self) -> dict:
        return {"reason": self.reason, "measured": self.measured, "threshold": self.threshold}


@dataclass
class SleepReport:
    trigger: SleepTrigger
    pairs_strengthened: int = 0
    edges_downscaled: int = 0
    episodes_transferred: int = 0
    dreams_attempted: int = 0
    dreams_integrated: int = 0
    dream_paths: list[list[str]] = field(default_factory=list)
    theta_f: float = 0.0
    concepts_forgotten: int = 0
    forgotten_ids: list[str] = field(default_factory=list)
    started_at: datetime | None = None
    ended_at: datetime | None = None

    def as_dict(self) -> dict:
        return {
            "trigger": self.trigger.as_dict(),
            "pairs_strengthened": self.pairs_strengthened,
            "edges_downscaled": self.edges_downscaled,
            "episodes_transferred": self.episodes_transferred,
            "dreams_attempted": self.dreams_attempted,
            "dreams_integrated": self.dreams_integrated,
            "dream_paths": self.dream_paths,
            "theta_f": self.theta_f,
            "concepts_forgotten": self.concepts_forgotten,
            "forgotten_ids": self.forgotten_ids,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "ended_at": self.ended_at.isoformat() if self.ended_at else None,
        }


def should_sleep(
    wm: WorkingMemory,
    ltm: MemoryGraph,
    last_sleep_time: datetime,
    now: datetime,
    config: EngineConfig,
) -> SleepTrigger | None:
    """First exceeded condition wins, checked entropy -> conflict -> time."""
    entropy = wm.entropy()
    if entropy > config.theta_e:
        return SleepTrigger("entropy", entropy, config.theta_e)
    density = ltm.conflict_density()
    if density > config.theta_c:
        return SleepTrigger("conflict", density, config.theta_c)
    elapsed = hours_between(now, last_sleep_time)
    if elapsed > config.tau_hours:
        return SleepTrigger("time", elapsed, config.tau_hours)
    return None


def nrem_consolidate(
    wm: WorkingMemory,
    ltm: MemoryGraph,
    config: EngineConfig,
    now: datetime,
) -> tuple[int, int, list[Episode]]:
    """Replay episodes, strengthen co-occurring pairs, downscale, clear.

    Returns (pairs_strengthened, edges_downscaled, transferred episodes).
    The transferred episodes are the dream-seed snapshot: they are taken
    before the buffer is cleared. Episode concepts already live in long-term
    memory (ingestion upserts immediately), so transfer refreshes their
    last access time rather than re-merging content.
    """
    if config.is_disabled("nrem"):
        return 0, 0, []
    pairs = 0
    importances = {}
    for episode in wm.episodes:
        ids = list(dict.fromkeys(episode.concept_ids))
        for ci, cj in itertools.combinations(ids, 2):
            if ci not in ltm or cj not in ltm:
                continue
            if ci not in importances:
                importances[ci] = ltm.get(ci).importance
            if cj not in importances:
                importances[cj] = ltm.get(cj).importance
            delta = config.eta * importances[ci] * importances[cj]
            ltm.add_or_strengthen(ci, cj, Predicate.RELATED_TO, delta, now)
            pairs += 1
    downscaled = ltm.scale_strengths(config.alpha)
    for episode in wm.episodes:
        for cid in episode.concept_ids:
            if cid in ltm:
                ltm.refresh_last_access(cid, now)
    transferred = wm.clear()
    return pairs, downscaled, transferred


def rem_dream(
    ltm: MemoryGraph,
    seed_episodes: list[Episode],
    rng: random.Random,
    config: EngineConfig,
    now: datetime,
) -> tuple[int, int, list[list[str]]]:
    """Strength-weighted random walks from high-importance seeds.

    A walk is integrated as a new related_to edge from its start to its end
    when the endpoints differ, are not already directly linked in either
    direction, and no consecutive pair along the walk is joined by a
    contradicts edge.
    """
    seed_pool: dict[str, float] = {}
    for episode in seed_episodes:
        for cid in episode.concept_ids:
            if cid in ltm and cid not in seed_pool:
                seed_pool[cid] = ltm.get(cid).importance
    seeds = sorted(seed_pool, key=lambda cid: (-seed_pool[cid], cid))[: config.rem_seed_count]

    attempted = 0
    integrated = 0
    paths: list[list[str]] = []
    for seed in seeds:
        attempted += 1
        path = random_walk(ltm, seed, config.rem_walk_steps, rng)
        paths.append(path)
        if integrate_walk(ltm, path, config.eta, now):
            integrated += 1
    return attempted, integrated, paths


def walk_choices(ltm: MemoryGraph, node: str) -> list[tuple[str, float]]:
    """Outgoing non-contradicts edges as (destination, strength) pairs."""
    return [
        (dst, strength)
        for dst, pred, strength in ltm.out_edges(node)
        if pred is not Predicate.CONTRADICTS
    ]


def walk_step(ltm: MemoryGraph, node: str, rng: random.Random) -> str | None:
    """Draw the next node with probability proportional to edge strength."""
    choices = walk_choices(ltm, node)
    if not choices:
        return None
    total = sum(s for _d, s in choices)
    if total <= 0.0:
        return None
    r = rng.random() * total
    acc = 0.0
    for dst, strength in choices:
        acc += strength
        if r < acc:
            return dst
    return choices[-1][0]


def random_walk(ltm: MemoryGraph, seed: str, steps: int, rng: random.Random) -> list[str]:
    path = [seed]
    current = seed
    for _ in range(steps):
        nxt = walk_step(ltm, current, rng)
        if nxt is None:
            break
        path.append(nxt)
        current = nxt
    return path


def integrate_walk(ltm: MemoryGraph, path: list[str], strength: float, now: datetime) -> bool:
    if len(path) < 2:
        return False
    start, end = path[0], path[-1]
    if start == end:
        return False
    if ltm.has_edge_between(start, end):
        return False
    for a, b in zip(path, path[1:]):
        if ltm.has_contradicts_between(a, b):
            return False
    ltm.add_or_strengthen(start, end, Predicate.RELATED_TO, strength, now)
    return True


def retention_score(importance: float, last_access: datetime, now: datetime, config: EngineConfig) -> float:
    """Blend of importance and recency; recency decays exponentially."""
    age_hours = hours_between(now, last_access)
    recency = math.exp(-config.lambda_per_hour * age_hours)
    return config.beta1 * importance + config.beta2 * recency


def adaptive_threshold(ltm: MemoryGraph, config: EngineConfig) -> float:
    """Pruning threshold from the unprotected importance distribution.

    Rises with graph size relative to the target so forgetting pressure
    grows as memory fills; clamped below so tiny graphs are not purged.
    """
    pool = ltm.unprotected()
    if pool:
        mean = sum(c.importance for c in pool) / len(pool)
        var = sum((c.importance - mean) ** 2 for c in pool) / len(pool)
        raw = mean + math.sqrt(var) * (ltm.node_count / config.target_size)
    else:
        raw = 0.0
    return max(raw, config.theta_f_floor)


def forget(ltm: MemoryGraph, now: datetime, config: EngineConfig) -> tuple[float, list[str]]:
    """Remove unprotected concepts whose retention score falls below theta_f."""
    theta_f = adaptive_threshold(ltm, config)
    doomed = [
        c.id
        for c in ltm.unprotected()
        if retention_score(c.importance, c.last_access, now, config) < theta_f
    ]
    for cid in doomed:
        ltm.remove_concept(cid)
    return theta_f, doomed
