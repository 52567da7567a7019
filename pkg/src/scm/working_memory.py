"""Capacity-limited episodic buffer with strict oldest-first eviction."""
from __future__ import annotations

import math
from dataclasses import replace
from datetime import datetime

from .errors import NotFoundError
from .model import Episode
from .valuation import composite_importance, repetition


class WorkingMemory:
    """Holds the most recent episodes; size never exceeds capacity.

    Eviction is strictly FIFO: access boosts affect importance, not
    eviction order.
    """

    def __init__(self, capacity: int = 7, tagger_weights=(0.30, 0.20, 0.35, 0.15)):
        self.capacity = capacity
        self.tagger_weights = tagger_weights
        self.episodes: list[Episode] = []

    def __len__(self) -> int:
        return len(self.episodes)

    def admit(self, episode: Episode) -> Episode | None:
        """Append an episode; return the evicted oldest one, if any."""
        self.episodes.append(episode)
        if len(self.episodes) > self.capacity:
            return self.episodes.pop(0)
        return None

    def get(self, eid: str) -> Episode:
        for ep in self.episodes:
            if ep.eid == eid:
                return ep
        raise NotFoundError(f"no episode {eid!r} in working memory")

    def touch(self, eid: str, now: datetime) -> Episode:
        """Record an access: bump the counter and refresh repetition."""
        for i, ep in enumerate(self.episodes):
            if ep.eid != eid:
                continue
            count = ep.access_count + 1
            max_count = max(count, max(e.access_count for e in self.episodes))
            value = replace(ep.value, repetition=repetition(count, max_count))
            updated = replace(
                ep,
                access_count=count,
                last_access=now,
                value=value,
                importance=composite_importance(value, self.tagger_weights),
            )
            self.episodes[i] = updated
            return updated
        raise NotFoundError(f"no episode {eid!r} in working memory")

    def entropy(self) -> float:
        """Shannon entropy of the importance distribution, normalized to [0, 1]."""
        n = len(self.episodes)
        if n <= 1:
            return 0.0
        total = sum(ep.importance for ep in self.episodes)
        if total <= 0.0:
            return 0.0
        h = 0.0
        for ep in self.episodes:
            p = ep.importance / total
            if p > 0.0:
                h -= p * math.log(p)
        return h / math.log(n)

    def clear(self) -> list[Episode]:
        """Empty the buffer, returning the episodes that were held."""
        held = self.episodes
        self.episodes = []
        return held
