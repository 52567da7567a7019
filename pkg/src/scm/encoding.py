"""Text encoding: rule-based concept extraction and hashed embeddings.

The local extractor and embedder are pure and deterministic so benchmark
runs are reproducible. Remote HTTP variants are optional; when they are
unreachable the module falls back to the local path and flags the result
as degraded.
"""
from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, InvalidArgumentError
from .model import ConceptType, Predicate, normalize_label, null_embedding

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"[a-z0-9]+")
_CLAUSE_SPLIT = re.compile(r"[.!?;,]+|\band\b", re.IGNORECASE)
_LEADING_FILLER = re.compile(r"^(?:a|an|the|my|in|on|at|of)\s+", re.IGNORECASE)

SENTIMENT_LEXICON = {
    "love": 0.8,
    "adore": 0.8,
    "enjoy": 0.6,
    "like": 0.6,
    "great": 0.7,
    "happy": 0.7,
    "hate": -0.8,
    "awful": -0.8,
    "dislike": -0.6,
    "sad": -0.7,
    "terrible": -0.7,
}


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric tokens, single characters dropped.

    Tokens of four or more characters lose one trailing 's' so simple
    plural/verb variants ("lives"/"live", "likes"/"like") hash together.
    """
    out = []
    for tok in _TOKEN.findall(text.lower()):
        if len(tok) < 2:
            continue
        if len(tok) >= 4 and tok.endswith("s"):
            tok = tok[:-1]
        out.append(tok)
    return out


@lru_cache(maxsize=65536)
def _token_slot(token: str) -> tuple[int, float]:
    h = int.from_bytes(hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(), "big")
    sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
    return h, sign


class HashEmbedder:
    """Deterministic signed feature hashing into a fixed dimension."""

    def __init__(self, dim: int = 384):
        if dim < 1:
            raise ConfigurationError("embedding dimension must be >= 1")
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        if not text or not text.strip():
            raise InvalidArgumentError("cannot embed empty text")
        vec = np.zeros(self.dim, dtype=np.float64)
        tokens = tokenize(text)
        if not tokens:
            return vec  # the designated null embedding
        dim = self.dim
        for tok in tokens:
            h, sign = _token_slot(tok)
            vec[h % dim] += sign
        sq = float(vec @ vec)
        if sq == 0.0:
            return vec
        return vec / (sq**0.5)


def sentiment(text: str, hint: float | None = None) -> float:
    """Scalar sentiment in [-1, 1]: extractor hint if present, else lexicon."""
    if hint is not None:
        return max(-1.0, min(1.0, float(hint)))
    hits = [SENTIMENT_LEXICON[t] for t in tokenize(text) if t in SENTIMENT_LEXICON]
    if not hits:
        return 0.0
    return sum(hits) / len(hits)


@dataclass(frozen=True)
class ExtractedConcept:
    label: str
    ctype: ConceptType
    description: str = ""
    sentiment_hint: float | None = None


@dataclass(frozen=True)
class ExtractedRelation:
    src_label: str
    predicate: Predicate
    dst_label: str


@dataclass
class ExtractionResult:
    concepts: list[ExtractedConcept] = field(default_factory=list)
    relations: list[ExtractedRelation] = field(default_factory=list)
    degraded: bool = False


USER_LABEL = "user"
USER_DESCRIPTION = "the conversational partner"


def _strip_filler(phrase: str) -> str:
    prev = None
    phrase = phrase.strip()
    while phrase != prev:
        prev = phrase
        phrase = _LEADING_FILLER.sub("", phrase).strip()
    return phrase


class RuleBasedExtractor:
    """Frozen pattern table over clauses; pure and deterministic.

    Clauses are split on sentence punctuation (plus commas) and the word
    "and"; the first matching pattern per clause wins. A synthetic "user"
    concept anchors first-person statements.
    """

    kind = "rule_based"

    _NAME = re.compile(r"^my name is\s+(?P<x>.+)$", re.IGNORECASE)
    _LIVE = re.compile(r"^i live in\s+(?P<x>.+)$", re.IGNORECASE)
    _WORK = re.compile(r"^i work (?P<how>as|at)\s+(?P<x>.+)$", re.IGNORECASE)
    _LIKE = re.compile(r"^i (?P<verb>like|love|enjoy)\s+(?P<x>.+)$", re.IGNORECASE)
    _HATE = re.compile(r"^i (?P<verb>hate|dislike)\s+(?P<x>.+)$", re.IGNORECASE)
    _ISA = re.compile(r"^(?P<x>.+?)\s+is\s+(?P<y>.+)$", re.IGNORECASE)

    def extract(self, text: str, prior_preferences: dict[str, float] | None = None) -> ExtractionResult:
        if not text or not text.strip():
            raise InvalidArgumentError("cannot extract from empty text")
        prior = dict(prior_preferences or {})
        result = ExtractionResult()
        seen: set[tuple[str, ConceptType]] = set()
        user_needed = False

        def add_concept(c: ExtractedConcept) -> None:
            key = (normalize_label(c.label), c.ctype)
            if key in seen:
                return
            seen.add(key)
            result.concepts.append(c)

        for clause in _CLAUSE_SPLIT.split(text):
            clause = clause.strip()
            if not clause:
                continue
            m = self._NAME.match(clause)
            if m:
                name = _strip_filler(m.group("x"))
                if name:
                    add_concept(ExtractedConcept(name, ConceptType.PERSON, "user's name"))
                    user_needed = True
                continue
            m = self._LIVE.match(clause)
            if m:
                place = _strip_filler(m.group("x"))
                if place:
                    add_concept(ExtractedConcept(place, ConceptType.LOCATION, f"lives in {place}"))
                    result.relations.append(ExtractedRelation(USER_LABEL, Predicate.RELATED_TO, place))
                    user_needed = True
                continue
            m = self._WORK.match(clause)
            if m:
                what = _strip_filler(m.group("x"))
                if what:
                    how = m.group("how").lower()
                    add_concept(ExtractedConcept(what, ConceptType.FACT, f"works {how} {what}"))
                    user_needed = True
                continue
            m = self._LIKE.match(clause)
            if m:
                obj = _strip_filler(m.group("x"))
                if obj:
                    hint = SENTIMENT_LEXICON[m.group("verb").lower()]
                    self._add_preference(result, add_concept, obj, hint, prior)
                    user_needed = True
                continue
            m = self._HATE.match(clause)
            if m:
                obj = _strip_filler(m.group("x"))
                if obj:
                    hint = SENTIMENT_LEXICON[m.group("verb").lower()]
                    self._add_preference(result, add_concept, obj, hint, prior)
                    user_needed = True
                continue
            m = self._ISA.match(clause)
            if m:
                x = _strip_filler(m.group("x"))
                y = _strip_filler(m.group("y"))
                if x and y:
                    add_concept(ExtractedConcept(x, ConceptType.FACT, f"{x} is {y}"))
                    add_concept(ExtractedConcept(y, ConceptType.ABSTRACT, ""))
                    result.relations.append(ExtractedRelation(x, Predicate.HAS_PROPERTY, y))
                continue

        if user_needed:
            result.concepts.insert(
                0, ExtractedConcept(USER_LABEL, ConceptType.PERSON, USER_DESCRIPTION)
            )
        return result

    def _add_preference(self, result, add_concept, obj: str, hint: float, prior: dict[str, float]) -> None:
        verb = "likes" if hint >= 0 else "dislikes"
        add_concept(ExtractedConcept(obj, ConceptType.PREFERENCE, f"{verb} {obj}", hint))
        result.relations.append(ExtractedRelation(USER_LABEL, Predicate.PREFERS, obj))
        norm = normalize_label(obj)
        old = prior.get(norm)
        if old is not None and old * hint < 0:
            # Flipped preference: record the conflict for sleep-time triggers.
            result.relations.append(ExtractedRelation(obj, Predicate.CONTRADICTS, obj))
        prior[norm] = hint


class RemoteExtractor:
    """HTTP extractor speaking {text} -> ExtractionResult JSON.

    Output is validated against the closed taxonomies: unknown concept
    types coerce to abstract and unknown predicates to related_to. On any
    transport failure the rule-based extractor takes over and the result
    is marked degraded.
    """

    kind = "remote_llm"

    def __init__(self, url: str, timeout: float = 10.0, transport=None):
        import httpx

        self.url = url
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self._fallback = RuleBasedExtractor()

    def extract(self, text: str, prior_preferences: dict[str, float] | None = None) -> ExtractionResult:
        if not text or not text.strip():
            raise InvalidArgumentError("cannot extract from empty text")
        import httpx

        try:
            resp = self._client.post(self.url, json={"text": text})
            resp.raise_for_status()
            payload = resp.json()
        except (httpx.HTTPError, json.JSONDecodeError) as exc:
            logger.warning("remote extractor unavailable (%s); using rule-based fallback", exc)
            result = self._fallback.extract(text, prior_preferences)
            result.degraded = True
            return result
        return self._validate(payload)

    @staticmethod
    def _validate(payload: dict) -> ExtractionResult:
        result = ExtractionResult()
        labels: set[str] = set()
        for row in payload.get("concepts", []):
            label = str(row.get("label", "")).strip()
            if not label:
                continue
            hint = row.get("sentiment_hint")
            result.concepts.append(
                ExtractedConcept(
                    label=label,
                    ctype=ConceptType.coerce(row.get("ctype", "abstract")),
                    description=str(row.get("description", "")),
                    sentiment_hint=None if hint is None else max(-1.0, min(1.0, float(hint))),
                )
            )
            labels.add(normalize_label(label))
        for row in payload.get("relations", []):
            src = str(row.get("src_label", "")).strip()
            dst = str(row.get("dst_label", "")).strip()
            if not src or not dst:
                continue
            result.relations.append(
                ExtractedRelation(src, Predicate.coerce(row.get("predicate", "related_to")), dst)
            )
        return result


def extractor_from_env(env=None):
    """Build the extractor selected by EXTRACTOR_KIND / EXTRACTOR_URL."""
    import os

    env = env if env is not None else os.environ
    kind = env.get("EXTRACTOR_KIND", "rule_based").strip().lower()
    if kind == "remote_llm":
        url = env.get("EXTRACTOR_URL")
        if not url:
            raise ConfigurationError("EXTRACTOR_KIND=remote_llm requires EXTRACTOR_URL")
        timeout = float(env.get("REQUEST_TIMEOUT_SECS", "10"))
        return RemoteExtractor(url, timeout=timeout)
    if kind != "rule_based":
        raise ConfigurationError(f"unknown EXTRACTOR_KIND {kind!r}")
    return RuleBasedExtractor()


def embedder_from_env(dim: int, env=None):
    """Build the embedder: remote when EMBEDDER_URL is set, hashing otherwise."""
    import os

    env = env if env is not None else os.environ
    url = env.get("EMBEDDER_URL")
    dim = int(env.get("EMBEDDING_DIM", dim))
    if url:
        timeout = float(env.get("REQUEST_TIMEOUT_SECS", "10"))
        return RemoteEmbedder(url, dim, timeout=timeout)
    return HashEmbedder(dim)


class RemoteEmbedder:
    """HTTP embedder speaking {text} -> {values: [...]}.

    A dimension mismatch is a configuration error; an unreachable endpoint
    falls back to hashing and sets the degraded flag on the engine report.
    """

    def __init__(self, url: str, dim: int, timeout: float = 10.0, transport=None):
        import httpx

        self.url = url
        self.dim = dim
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self._fallback = HashEmbedder(dim)
        self.degraded = False

    def embed(self, text: str) -> np.ndarray:
        if not text or not text.strip():
            raise InvalidArgumentError("cannot embed empty text")
        import httpx

        try:
            resp = self._client.post(self.url, json={"text": text})
            resp.raise_for_status()
            values = resp.json()["values"]
        except (httpx.HTTPError, json.JSONDecodeError, KeyError) as exc:
            logger.warning("remote embedder unavailable (%s); using hash fallback", exc)
            self.degraded = True
            return self._fallback.embed(text)
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (self.dim,):
            raise ConfigurationError(
                f"remote embedder returned dimension {arr.shape}, expected ({self.dim},)"
            )
        norm = np.linalg.norm(arr)
        if norm == 0.0:
            return null_embedding(self.dim)
        return arr / norm
