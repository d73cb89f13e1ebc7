"""Score fusion and ranking: combined = lambda * s1 + (1 - lambda) * s2,
sorted descending with an ascending-id tie-break so orderings are total
and reproducible."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .errors import UnknownQuestionError
from .vectorspace import cosine_tf, tf_vectorize
from .embedding import cosine_semantic

if TYPE_CHECKING:
    from .store import QuestionIndex


def combine(s1: float, s2: float, lam: float) -> float:
    """Weighted mean of the syntactic and semantic scores."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    if not (0.0 <= s1 <= 1.0 and 0.0 <= s2 <= 1.0):
        raise ValueError("scores must be in [0, 1]")
    return lam * s1 + (1.0 - lam) * s2


@dataclass(frozen=True)
class ScoredCandidate:
    question_id: str
    s1: float
    s2: float
    combined: float
    rank: int


@dataclass(frozen=True)
class SuggestionResult:
    query_text: str
    candidates: tuple[ScoredCandidate, ...]
    lambda_used: float
    cutoff: str = "none"


def rank_candidates(
    query_tokens: Sequence[str],
    candidate_ids: Iterable[str],
    index: "QuestionIndex",
    lam: float,
    query_text: str = "",
) -> SuggestionResult:
    """Score each candidate with both channels, fuse, sort, assign ranks."""
    query_tf = tf_vectorize(query_tokens)
    query_emb = index.provider.embed(query_tokens)

    scored = []
    for qid in candidate_ids:
        question = index.questions.get(qid)
        if question is None:
            raise UnknownQuestionError(f"unknown question id: {qid!r}")
        s1 = cosine_tf(query_tf, question.tf)
        s2 = cosine_semantic(query_emb, question.embedding)
        scored.append((qid, s1, s2, combine(s1, s2, lam)))

    scored.sort(key=lambda item: (-item[3], item[0]))
    candidates = tuple(
        ScoredCandidate(qid, s1, s2, c, rank)
        for rank, (qid, s1, s2, c) in enumerate(scored, start=1)
    )
    return SuggestionResult(query_text, candidates, lambda_used=lam)


def apply_cutoff(
    result: SuggestionResult,
    top_k: int | None = None,
    threshold: float | None = None,
) -> SuggestionResult:
    """Truncate to the top k ranks or to combined >= threshold (inclusive)."""
    if (top_k is None) == (threshold is None):
        raise ValueError("exactly one of top_k / threshold must be given")
    if top_k is not None:
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        kept = result.candidates[:top_k]
        label = f"top_k={top_k}"
    else:
        if not 0.0 <= threshold <= 1.0:
            raise ValueError("threshold must be in [0, 1]")
        kept = tuple(c for c in result.candidates if c.combined >= threshold)
        label = f"threshold={threshold}"
    return replace(result, candidates=kept, cutoff=label)
