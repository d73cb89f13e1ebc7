"""Shared fixtures: engineered corpora whose syntactic/semantic score
structure is known by construction.

The engineered environments use a hand-built word-vector table. Overlap
and filler words carry zero vectors so a question's embedding direction is
exactly its unique "carrier" word's vector; term overlap with the probe is
chosen so TF cosines come out as exact rationals (all texts are 20 distinct
tokens, so s1 = overlap / 20).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import pytest

from qsim.embedding import TableEmbedder, load_word_vectors
from qsim.preprocess import PreprocessConfig, default_stopwords
from qsim.store import QuestionIndex, ingest_corpus


def write_wordvec_file(path: Path, dimension: int, entries: list[tuple[str, list[float]]]) -> None:
    lines = [f"{len(entries)} {dimension}"]
    for word, vec in entries:
        lines.append(word + " " + " ".join(repr(float(x)) for x in vec))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_corpus_csv(path: Path, rows: list[tuple[str, str]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "title"])
        writer.writerows(rows)


def write_ranked_file(path: Path, assignments: dict[str, int]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["question_id", "assigned_rank"])
        for qid, rank in assignments.items():
            writer.writerow([qid, rank])


def write_manifest(path: Path, sets: list[tuple[str, str]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["probe_query", "ranked_file"])
        writer.writerows(sets)


@dataclass
class CalibrationEnv:
    index: QuestionIndex
    corpus_path: Path
    wordvec_path: Path
    manifest_path: Path
    config: PreprocessConfig
    probes: list[str]


def _build_index(tmp_path: Path, vocab: list[tuple[str, list[float]]], dimension: int,
                 rows: list[tuple[str, str]]) -> tuple[QuestionIndex, Path, Path, PreprocessConfig]:
    wordvec_path = tmp_path / "vectors.txt"
    write_wordvec_file(wordvec_path, dimension, vocab)
    corpus_path = tmp_path / "corpus.csv"
    write_corpus_csv(corpus_path, rows)
    config = PreprocessConfig(stopwords=default_stopwords())
    provider = TableEmbedder(load_word_vectors(wordvec_path))
    index = ingest_corpus(corpus_path, "csv", config, provider)
    return index, corpus_path, wordvec_path, config


@pytest.fixture
def syntactic_env(tmp_path: Path) -> CalibrationEnv:
    """Admin ranks follow syntactic order and contradict semantic order.

    q01/q02 tie on s1 (2 of 3 probe terms each); ascending-id tie-break at
    lambda=1 reproduces the admin order exactly, while q02's semantic score
    of 1 flips the pair at every smaller lambda. Unique SSRD minimum at 1.0.
    """
    # carrier words chosen to be Porter fixpoints so they stay in-vocabulary
    vocab = [
        ("alpha", [0.0, 0.0]), ("beta", [0.0, 0.0]), ("gamma", [1.0, 0.0]),
        ("dnvec", [-3.0, 0.0]), ("upvec", [3.0, 0.0]),
        ("delta", [0.0, 0.0]), ("epsilon", [0.0, 0.0]), ("zeta", [0.0, 0.0]),
    ]
    rows = [
        ("q01", "alpha beta dnvec"),
        ("q02", "alpha beta upvec"),
        ("q03", "delta epsilon zeta"),
    ]
    index, corpus_path, wordvec_path, config = _build_index(tmp_path, vocab, 2, rows)
    ranked_path = tmp_path / "ranked_syn.csv"
    write_ranked_file(ranked_path, {"q01": 1, "q02": 2, "q03": 3})
    manifest_path = tmp_path / "driver.csv"
    probe = "alpha beta gamma"
    write_manifest(manifest_path, [(probe, ranked_path.name)])
    return CalibrationEnv(index, corpus_path, wordvec_path, manifest_path, config, [probe])


@pytest.fixture
def semantic_env(tmp_path: Path) -> CalibrationEnv:
    """Mirror image: admin ranks follow semantic order, contradict
    syntactic. SSRD is 0 on the whole 0.0..0.5 grid range; the smallest-
    lambda tie-break lands on 0.0."""
    vocab = [
        ("alpha", [0.0, 0.0]), ("beta", [0.0, 0.0]), ("gamma", [1.0, 0.0]),
        ("vecsem", [1.0, 0.0]), ("dnvec", [-3.0, 0.0]),
        ("blorpa", [0.0, 0.0]), ("blorpb", [0.0, 0.0]),
        ("delta", [0.0, 0.0]), ("epsilon", [0.0, 0.0]), ("zeta", [0.0, 0.0]),
    ]
    rows = [
        ("q01", "vecsem blorpa blorpb"),
        ("q02", "alpha beta dnvec"),
        ("q03", "delta epsilon zeta"),
    ]
    index, corpus_path, wordvec_path, config = _build_index(tmp_path, vocab, 2, rows)
    ranked_path = tmp_path / "ranked_sem.csv"
    write_ranked_file(ranked_path, {"q01": 1, "q02": 2, "q03": 3})
    manifest_path = tmp_path / "driver.csv"
    probe = "alpha beta gamma"
    write_manifest(manifest_path, [(probe, ranked_path.name)])
    return CalibrationEnv(index, corpus_path, wordvec_path, manifest_path, config, [probe])


# Per-set (s2 of q3, s2 of q4); the q3/q4 pair flips at
# lambda/(1-lambda) = (s2_q4 - s2_q3) / (s1_q3 - s1_q4), moving the lower
# edge of each set's zero-SSRD region to 0.3 / 0.4 / 0.5.
_MIXED_Q3Q4 = [(0.1, 0.2), (0.1, 0.315), (0.1, 0.427)]


def build_mixed_env(tmp_path: Path) -> CalibrationEnv:
    """50-question corpus, 3 rank sets of 4 questions.

    In each set the syntactic channel misranks the q1/q2 admin pair
    (s1: q3 > q2 > q1 > q4) and the semantic channel misranks q3/q4
    (s2: q1 > q2 > q4 > q3); only intermediate lambdas rank all four
    correctly. Exact channel scores per set: s1 = (0.2, 0.3, 0.5, 0.1),
    s2 = (1.0, 0.6, a, b) with (a, b) from _MIXED_Q3Q4.
    """
    vocab: list[tuple[str, list[float]]] = []
    rows: list[tuple[str, str]] = []
    probes: list[str] = []
    ranked_files: list[tuple[str, dict[str, int]]] = []

    overlap_counts = [4, 6, 10, 2]
    for j, (a, b) in enumerate(_MIXED_Q3Q4, start=1):
        pool = [f"p{j}w{i:02d}" for i in range(1, 20)]
        for word in pool:
            vocab.append((word, [0.0, 0.0]))
        probe_carrier = f"p{j}c0"
        vocab.append((probe_carrier, [1.0, 0.0]))
        probe = " ".join(pool + [probe_carrier])
        probes.append(probe)

        s2_targets = [1.0, 0.6, a, b]
        assignments = {}
        for i, (m, t) in enumerate(zip(overlap_counts, s2_targets), start=1):
            qid = f"s{j}q{i}"
            carrier = f"s{j}c{i}"
            vocab.append((carrier, [t, math.sqrt(1.0 - t * t)]))
            fillers = [f"f{j}x{i}{k:02d}" for k in range(19 - m)]
            for word in fillers:
                vocab.append((word, [0.0, 0.0]))
            rows.append((qid, " ".join(pool[:m] + fillers + [carrier])))
            assignments[qid] = i
        ranked_files.append((f"ranked{j}.csv", assignments))

    for k in range(38):
        rows.append((f"zz{k:02d}", f"dist{k}a dist{k}b dist{k}c"))

    index, corpus_path, wordvec_path, config = _build_index(tmp_path, vocab, 2, rows)
    manifest_path = tmp_path / "driver.csv"
    manifest_rows = []
    for probe, (name, assignments) in zip(probes, ranked_files):
        write_ranked_file(tmp_path / name, assignments)
        manifest_rows.append((probe, name))
    write_manifest(manifest_path, manifest_rows)
    return CalibrationEnv(index, corpus_path, wordvec_path, manifest_path, config, probes)


@pytest.fixture
def mixed_env(tmp_path: Path) -> CalibrationEnv:
    return build_mixed_env(tmp_path)


@dataclass
class ParaphraseEnv:
    index: QuestionIndex
    probe: str
    corpus_path: Path
    wordvec_path: Path
    config: PreprocessConfig


@pytest.fixture
def paraphrase_env(tmp_path: Path) -> ParaphraseEnv:
    """Paraphrase pairs with disjoint vocabulary: every corpus question uses
    synonyms (identical word vectors) of the probe's words, never the words
    themselves."""
    dimension = 3
    basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    vocab = []
    rows = []
    for k in range(7):
        words = [f"g{g}s{k}" for g in range(3)]
        for g, word in enumerate(words):
            vocab.append((word, basis[g]))
        if k == 0:
            probe = " ".join(words)
        else:
            rows.append((f"q{k:02d}", " ".join(words)))
    index, corpus_path, wordvec_path, config = _build_index(tmp_path, vocab, dimension, rows)
    return ParaphraseEnv(index, probe, corpus_path, wordvec_path, config)
