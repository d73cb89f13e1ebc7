"""Term-frequency vectors and their cosine: the word-overlap similarity
channel. Scores land in [0, 1] because all components are counts."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field


@dataclass(frozen=True)
class TfVector:
    """Sparse term-count vector with a cached Euclidean norm."""

    entries: dict[str, int]
    norm: float = field(init=False)

    def __post_init__(self):
        if any(c < 1 for c in self.entries.values()):
            raise ValueError("zero or negative counts must be omitted")
        object.__setattr__(self, "norm", math.sqrt(sum(c * c for c in self.entries.values())))


def tf_vectorize(tokens: Sequence[str]) -> TfVector:
    return TfVector(dict(Counter(tokens)))


def cosine_tf(a: TfVector, b: TfVector) -> float:
    """Cosine of two TF vectors; 0 by convention if either norm is 0."""
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    if len(b.entries) < len(a.entries):
        a, b = b, a
    dot = sum(count * b.entries.get(term, 0) for term, count in a.entries.items())
    # rounding can push e.g. self-similarity a hair above 1
    return min(1.0, dot / (a.norm * b.norm))
