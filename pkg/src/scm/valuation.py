"""Importance scoring: the four value dimensions and their combination."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .model import ValueVector, is_null_embedding


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; any null vector compares as 0."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def novelty(embedding: np.ndarray, memory_embeddings) -> float:
    """1 minus the best cosine match against stored embeddings, in [0, 1]."""
    if is_null_embedding(embedding):
        raise InvalidArgumentError("novelty is undefined for the null embedding")
    best = None
    for other in memory_embeddings:
        c = cosine(embedding, other)
        if best is None or c > best:
            best = c
    if best is None:
        return 1.0
    return min(1.0, max(0.0, 1.0 - best))


@dataclass(frozen=True)
class SessionGoal:
    """The current conversational goal and its embedding."""

    text: str
    embedding: np.ndarray


def task_relevance(embedding: np.ndarray, goal: SessionGoal | None) -> float:
    """Alignment with the session goal; 0 when either side is null/unset."""
    if goal is None:
        return 0.0
    c = cosine(embedding, goal.embedding)
    return max(-1.0, min(1.0, c))


def repetition(access_count: int, max_access_count: int) -> float:
    """Normalized access frequency, bounded in [0, 1)."""
    if access_count < 0 or access_count > max_access_count:
        raise InvalidArgumentError(
            f"need 0 <= access_count <= max_access_count, got {access_count}/{max_access_count}"
        )
    return access_count / (max_access_count + 1)


def composite_importance(value: ValueVector, weights=(0.30, 0.20, 0.35, 0.15)) -> float:
    """Weighted combination of the four dimensions, clamped to [0, 1].

    Emotional valence contributes its magnitude; negative task relevance
    contributes nothing so the score stays usable as a probability weight.
    """
    w_nov, w_emo, w_task, w_rep = weights
    score = (
        w_nov * value.novelty
        + w_emo * abs(value.emotional)
        + w_task * max(value.task, 0.0)
        + w_rep * value.repetition
    )
    return min(1.0, max(0.0, score))
