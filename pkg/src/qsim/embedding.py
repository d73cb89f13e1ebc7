"""Document embeddings: word-vector tables, mean pooling, cosine scoring,
and the provider contract that lets the semantic backend be swapped.

Two providers ship: one backed by a word-vector file (mean of in-vocabulary
word vectors), one hashing words to stable pseudo-random unit vectors for
hermetic tests. Raw cosines are clamped at 0 so the semantic score shares
the [0, 1] range of the syntactic one.
"""

from __future__ import annotations

import hashlib
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from .errors import DimensionMismatchError, WordVectorFormatError


@dataclass(frozen=True)
class DocumentEmbedding:
    vector: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.vector)):
            raise ValueError("embedding components must be finite")

    @property
    def is_zero(self) -> bool:
        return not np.any(self.vector)

    @property
    def dimension(self) -> int:
        return self.vector.shape[0]


class WordVectorTable:
    """Word -> dense vector lookup loaded from a text-format vector file."""

    def __init__(self, dimension: int, entries: dict[str, np.ndarray], source_id: str):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.entries = entries
        self.source_id = source_id

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def load_word_vectors(path: str | Path, limit: int | None = None) -> WordVectorTable:
    """Parse a text word-vector file: header '<count> <dimension>', then one
    '<word> <c1> ... <cd>' line per word. Duplicates keep the first entry."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split(" ")
        if len(parts) != 2:
            raise WordVectorFormatError(f"{path}:1: malformed header {header!r}")
        try:
            count, dimension = int(parts[0]), int(parts[1])
        except ValueError:
            raise WordVectorFormatError(f"{path}:1: non-integer header {header!r}") from None
        if dimension < 1 or count < 0:
            raise WordVectorFormatError(f"{path}:1: invalid header values {header!r}")

        entries: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            if limit is not None and len(entries) >= limit:
                break
            fields = line.rstrip("\n").split(" ")
            if len(fields) != dimension + 1:
                raise WordVectorFormatError(
                    f"{path}:{lineno}: expected {dimension} components, got {len(fields) - 1}"
                )
            word = fields[0]
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError:
                raise WordVectorFormatError(f"{path}:{lineno}: non-numeric component") from None
            if not np.all(np.isfinite(vec)):
                raise WordVectorFormatError(f"{path}:{lineno}: non-finite component")
            entries.setdefault(word, vec)

    h = hashlib.sha256()
    for word, vec in entries.items():
        h.update(word.encode())
        h.update(vec.tobytes())
    return WordVectorTable(dimension, entries, source_id=f"wordvec:{h.hexdigest()[:16]}")


def embed_mean(tokens: Sequence[str], table: WordVectorTable) -> DocumentEmbedding:
    """Mean of in-vocabulary token vectors; zero embedding if none are known."""
    vecs = [table.entries[t] for t in tokens if t in table.entries]
    if not vecs:
        return DocumentEmbedding(np.zeros(table.dimension))
    return DocumentEmbedding(np.mean(vecs, axis=0))


def cosine_semantic(a: DocumentEmbedding, b: DocumentEmbedding) -> float:
    """Cosine of two document embeddings, clamped below at 0."""
    if a.dimension != b.dimension:
        raise DimensionMismatchError(
            f"embedding dimensions differ: {a.dimension} vs {b.dimension}"
        )
    if a.is_zero or b.is_zero:
        return 0.0
    denom = np.linalg.norm(a.vector) * np.linalg.norm(b.vector)
    if denom == 0.0:  # subnormal components can underflow the norm
        return 0.0
    cos = float(np.dot(a.vector, b.vector) / denom)
    return max(0.0, min(1.0, cos))


class EmbeddingProvider(Protocol):
    """Deterministic tokens -> embedding backend."""

    dimension: int
    provider_id: str

    def embed(self, tokens: Sequence[str]) -> DocumentEmbedding: ...

    def oov_count(self, tokens: Sequence[str]) -> int: ...


class TableEmbedder:
    """Mean-of-word-vectors provider over a loaded table."""

    def __init__(self, table: WordVectorTable):
        self.table = table
        self.dimension = table.dimension
        self.provider_id = f"{table.source_id}:d={table.dimension}"

    def embed(self, tokens: Sequence[str]) -> DocumentEmbedding:
        return embed_mean(tokens, self.table)

    def oov_count(self, tokens: Sequence[str]) -> int:
        return sum(1 for t in tokens if t not in self.table.entries)


class HashEmbedder:
    """Maps every word to a stable seeded pseudo-random unit vector; the
    document embedding is the mean. Vocabulary-free, so nothing is OOV.

    The word vector is drawn from a Gaussian seeded by
    sha256("<seed>:<word>") and normalized, which is stable across
    processes and platforms.
    """

    def __init__(self, dimension: int, seed: int = 0):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self.seed = seed
        self.provider_id = f"hash:d={dimension}:seed={seed}"
        self._cache: dict[str, np.ndarray] = {}

    def _word_vector(self, word: str) -> np.ndarray:
        vec = self._cache.get(word)
        if vec is None:
            digest = hashlib.sha256(f"{self.seed}:{word}".encode()).digest()
            rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
            vec = rng.standard_normal(self.dimension)
            vec /= np.linalg.norm(vec)
            self._cache[word] = vec
        return vec

    def embed(self, tokens: Sequence[str]) -> DocumentEmbedding:
        if not tokens:
            return DocumentEmbedding(np.zeros(self.dimension))
        return DocumentEmbedding(np.mean([self._word_vector(t) for t in tokens], axis=0))

    def oov_count(self, tokens: Sequence[str]) -> int:
        return 0
