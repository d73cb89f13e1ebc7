"""Text normalization: punctuation stripping, lowercasing, tokenization,
stop-word removal and stemming.

The whole pipeline is a pure function of (text, config); the config
fingerprint binds cached vectors to the exact settings that produced them.
"""

from __future__ import annotations

import hashlib
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import porter

DEFAULT_PUNCTUATION = frozenset(string.punctuation)

STEMMER_CHOICES = ("porter", "none")


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stop-word file: one lowercase term per line, '#' comments."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    text = resources.files("qsim.data").joinpath("stopwords.txt").read_text("utf-8")
    words = {
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    }
    return frozenset(words)


@dataclass(frozen=True)
class PreprocessConfig:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    punctuation: frozenset[str] = DEFAULT_PUNCTUATION
    stemmer: str = "porter"

    def __post_init__(self):
        if self.stemmer not in STEMMER_CHOICES:
            raise ValueError(f"unknown stemmer {self.stemmer!r}")

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.stemmer.encode())
        h.update(b"\x00")
        h.update("\n".join(sorted(self.stopwords)).encode())
        h.update(b"\x00")
        h.update("".join(sorted(self.punctuation)).encode())
        return h.hexdigest()


def stem(token: str, config: PreprocessConfig) -> str:
    if config.stemmer == "porter":
        return porter.stem(token)
    return token


def preprocess(text: str, config: PreprocessConfig) -> list[str]:
    """Normalize raw text to a list of stemmed, lowercase tokens.

    Order: strip punctuation, lowercase, split on whitespace, drop stop
    words (matched before stemming), stem. A token whose stem lands on a
    stop word is dropped as well; without that the pipeline would not be
    idempotent on its own rejoined output. Degenerate input gives [].
    """
    for ch in config.punctuation:
        if ch in text:
            text = text.replace(ch, " ")
    out = []
    for token in text.lower().split():
        if token in config.stopwords:
            continue
        stemmed = stem(token, config)
        if stemmed not in config.stopwords:
            out.append(stemmed)
    return out
