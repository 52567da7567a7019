"""Shared domain types: concepts, relations, episodes, config, and clocks.

All value objects here are immutable or treated as such; mutation happens
only inside the engine modules that own them.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum

import numpy as np

from .errors import ConfigurationError, InvalidArgumentError

_WS = re.compile(r"\s+")


class ConceptType(str, Enum):
    PERSON = "person"
    PREFERENCE = "preference"
    FACT = "fact"
    EVENT = "event"
    OBJECT = "object"
    LOCATION = "location"
    ABSTRACT = "abstract"

    @classmethod
    def coerce(cls, raw: str) -> "ConceptType":
        """Map unknown extractor output onto the closed taxonomy."""
        try:
            return cls(str(raw).strip().lower())
        except ValueError:
            return cls.ABSTRACT


class Predicate(str, Enum):
    HAS_PROPERTY = "has_property"
    PREFERS = "prefers"
    RELATED_TO = "related_to"
    CONTRADICTS = "contradicts"
    CAUSES = "causes"
    PART_OF = "part_of"

    @classmethod
    def coerce(cls, raw: str) -> "Predicate":
        try:
            return cls(str(raw).strip().lower())
        except ValueError:
            return cls.RELATED_TO


def normalize_label(label: str) -> str:
    """Case-fold and collapse whitespace; identity key for concepts."""
    return _WS.sub(" ", label.strip()).casefold()


def make_concept_id(label: str, ctype: ConceptType) -> str:
    """Deterministic content id: equal (normalized label, type) => equal id."""
    norm = normalize_label(label)
    if not norm:
        raise InvalidArgumentError("concept label must be non-empty")
    digest = hashlib.blake2b(
        f"{ctype.value}\x1f{norm}".encode("utf-8"), digest_size=16
    )
    return digest.hexdigest()


@dataclass(frozen=True)
class ValueVector:
    """Four importance dimensions of a concept or episode."""

    novelty: float = 0.0     # [0, 1]
    emotional: float = 0.0   # [-1, 1]
    task: float = 0.0        # [-1, 1]
    repetition: float = 0.0  # [0, 1)

    def __post_init__(self):
        if not (-1e-9 <= self.novelty <= 1 + 1e-9):
            raise InvalidArgumentError(f"novelty out of range: {self.novelty}")
        if not (-1 - 1e-9 <= self.emotional <= 1 + 1e-9):
            raise InvalidArgumentError(f"emotional out of range: {self.emotional}")
        if not (-1 - 1e-9 <= self.task <= 1 + 1e-9):
            raise InvalidArgumentError(f"task out of range: {self.task}")
        if not (-1e-9 <= self.repetition < 1):
            raise InvalidArgumentError(f"repetition out of range: {self.repetition}")

    def as_dict(self) -> dict:
        return {
            "novelty": self.novelty,
            "emotional": self.emotional,
            "task": self.task,
            "repetition": self.repetition,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ValueVector":
        return cls(d["novelty"], d["emotional"], d["task"], d["repetition"])


def mean_value(values: list[ValueVector]) -> ValueVector:
    if not values:
        return ValueVector()
    n = len(values)
    return ValueVector(
        novelty=sum(v.novelty for v in values) / n,
        emotional=sum(v.emotional for v in values) / n,
        task=sum(v.task for v in values) / n,
        repetition=sum(v.repetition for v in values) / n,
    )


def null_embedding(dim: int) -> np.ndarray:
    return np.zeros(dim, dtype=np.float64)


def is_null_embedding(values: np.ndarray) -> bool:
    return not np.any(values)


def check_embedding(values: np.ndarray, dim: int) -> np.ndarray:
    """Enforce the storage invariant: unit norm (within 1e-6) or all-zero."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (dim,):
        raise InvalidArgumentError(f"embedding dimension {arr.shape} != ({dim},)")
    norm = float(np.linalg.norm(arr))
    if norm != 0.0 and abs(norm - 1.0) > 1e-6:
        raise InvalidArgumentError(f"embedding norm {norm} not 1 or 0")
    return arr


@dataclass(eq=False)
class Concept:
    """A typed semantic node in long-term memory."""

    id: str
    label: str
    ctype: ConceptType
    description: str
    embedding: np.ndarray
    value: ValueVector
    importance: float
    created_at: datetime
    last_access: datetime
    access_count: int = 0
    protected: bool = False

    def __eq__(self, other) -> bool:
        if not isinstance(other, Concept):
            return NotImplemented
        return (
            self.id == other.id
            and self.label == other.label
            and self.ctype == other.ctype
            and self.description == other.description
            and np.array_equal(self.embedding, other.embedding)
            and self.value == other.value
            and self.importance == other.importance
            and self.created_at == other.created_at
            and self.last_access == other.last_access
            and self.access_count == other.access_count
            and self.protected == other.protected
        )

    def copy(self) -> "Concept":
        return Concept(
            id=self.id,
            label=self.label,
            ctype=self.ctype,
            description=self.description,
            embedding=self.embedding.copy(),
            value=self.value,
            importance=self.importance,
            created_at=self.created_at,
            last_access=self.last_access,
            access_count=self.access_count,
            protected=self.protected,
        )


@dataclass(frozen=True)
class Relation:
    """Typed weighted directed edge; at most one per (src, dst, predicate)."""

    src: str
    dst: str
    predicate: Predicate
    strength: float
    created_at: datetime

    def __post_init__(self):
        if self.strength < 0:
            raise InvalidArgumentError("relation strength must be >= 0")


@dataclass(eq=True)
class Episode:
    """A working-memory entry for one processed utterance."""

    eid: str
    timestamp: datetime
    concept_ids: tuple[str, ...]
    text: str
    value: ValueVector
    importance: float
    last_access: datetime
    access_count: int = 0

    def __post_init__(self):
        if not self.concept_ids:
            raise InvalidArgumentError("episode must reference at least one concept")
        self.concept_ids = tuple(self.concept_ids)


# Ablation switch names accepted by EngineConfig.disabled.
ABLATABLE = ("wm_limit", "tagger", "nrem", "rem", "forget", "self")


@dataclass(frozen=True)
class EngineConfig:
    """All tunable parameters; defaults reproduce the benchmark suite."""

    wm_capacity: int = 7
    tagger_weights: tuple[float, float, float, float] = (0.30, 0.20, 0.35, 0.15)
    fusion_weights: tuple[float, float, float] = (0.5, 0.3, 0.2)
    eta: float = 0.1
    alpha: float = 0.8
    lambda_per_hour: float = 0.01
    beta1: float = 0.8
    beta2: float = 0.2
    theta_e: float = 0.9
    theta_c: float = 0.3
    tau_hours: float = 1.0
    target_size: int = 100
    theta_f_floor: float = 0.05
    rem_seed_count: int = 3
    rem_walk_steps: int = 5
    embedding_dim: int = 384
    rng_seed: int = 42
    self_label: str = "SCM"
    disabled: tuple[str, ...] = ()

    def validate(self) -> "EngineConfig":
        if self.wm_capacity < 1:
            raise ConfigurationError("wm_capacity must be >= 1")
        if abs(sum(self.tagger_weights) - 1.0) > 1e-9:
            raise ConfigurationError("tagger_weights must sum to 1.0")
        if abs(sum(self.fusion_weights) - 1.0) > 1e-9:
            raise ConfigurationError("fusion_weights must sum to 1.0")
        if not (0 < self.alpha <= 1):
            raise ConfigurationError("alpha must be in (0, 1]")
        if self.eta <= 0:
            raise ConfigurationError("eta must be > 0")
        if abs(self.beta1 + self.beta2 - 1.0) > 1e-9:
            raise ConfigurationError("beta1 + beta2 must equal 1.0")
        if self.target_size < 1:
            raise ConfigurationError("target_size must be >= 1")
        if self.embedding_dim < 1:
            raise ConfigurationError("embedding_dim must be >= 1")
        if self.theta_f_floor < 0:
            raise ConfigurationError("theta_f_floor must be >= 0")
        if self.rem_seed_count < 0 or self.rem_walk_steps < 0:
            raise ConfigurationError("rem parameters must be >= 0")
        unknown = set(self.disabled) - set(ABLATABLE)
        if unknown:
            raise ConfigurationError(f"unknown ablation switches: {sorted(unknown)}")
        return self

    def is_disabled(self, component: str) -> bool:
        return component in self.disabled

    def as_dict(self) -> dict:
        return {
            "wm_capacity": self.wm_capacity,
            "tagger_weights": list(self.tagger_weights),
            "fusion_weights": list(self.fusion_weights),
            "eta": self.eta,
            "alpha": self.alpha,
            "lambda_per_hour": self.lambda_per_hour,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "theta_e": self.theta_e,
            "theta_c": self.theta_c,
            "tau_hours": self.tau_hours,
            "target_size": self.target_size,
            "theta_f_floor": self.theta_f_floor,
            "rem_seed_count": self.rem_seed_count,
            "rem_walk_steps": self.rem_walk_steps,
            "embedding_dim": self.embedding_dim,
            "rng_seed": self.rng_seed,
            "self_label": self.self_label,
            "disabled": list(self.disabled),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        d = dict(d)
        d["tagger_weights"] = tuple(d.get("tagger_weights", (0.30, 0.20, 0.35, 0.15)))
        d["fusion_weights"] = tuple(d.get("fusion_weights", (0.5, 0.3, 0.2)))
        d["disabled"] = tuple(d.get("disabled", ()))
        return cls(**d).validate()


def value_for_importance(target: float, weights=(0.30, 0.20, 0.35, 0.15)) -> ValueVector:
    """Build a value vector whose weighted combination equals `target`.

    Fills novelty, then emotional, then task, then repetition. Used by
    benchmarks that pin importance directly; repetition stays below 1 so the
    target must leave headroom (target < w_nov + w_emo + w_task + w_rep).
    """
    if not (0.0 <= target <= sum(weights) - 1e-12):
        raise InvalidArgumentError(f"importance target {target} not representable")
    remaining = target
    dims = []
    for w in weights:
        if w <= 0:
            dims.append(0.0)
            continue
        d = min(1.0, remaining / w)
        dims.append(d)
        remaining -= d * w
        if remaining < 1e-15:
            remaining = 0.0
    return ValueVector(dims[0], dims[1], dims[2], dims[3])


UTC = timezone.utc


class Clock:
    """Monotonic non-decreasing time source."""

    simulated = False

    def now(self) -> datetime:  # pragma: no cover - interface
        raise NotImplementedError

    def advance(self, hours: float) -> datetime:
        raise InvalidArgumentError("advance() requires a simulated clock")


class WallClock(Clock):
    """Real time, clamped so now() never goes backwards."""

    def __init__(self, floor: datetime | None = None):
        self._last = floor or datetime.now(UTC)

    def now(self) -> datetime:
        t = datetime.now(UTC)
        if t < self._last:
            return self._last
        self._last = t
        return t


class SimulatedClock(Clock):
    """Time advances only through advance(); deterministic for benchmarks."""

    simulated = True
    DEFAULT_START = datetime(2026, 1, 1, tzinfo=UTC)

    def __init__(self, start: datetime | None = None):
        self._now = start or self.DEFAULT_START

    def now(self) -> datetime:
        return self._now

    def advance(self, hours: float) -> datetime:
        if hours < 0:
            raise InvalidArgumentError("cannot advance a clock backwards")
        self._now = self._now + timedelta(hours=hours)
        return self._now


def hours_between(later: datetime, earlier: datetime) -> float:
    """Fractional hours from earlier to later, floored at zero."""
    delta = (later - earlier).total_seconds() / 3600.0
    return max(delta, 0.0)
