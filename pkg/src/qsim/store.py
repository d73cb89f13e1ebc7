"""Corpus ingestion, index construction, and persistence of indexes and
calibration models.

Every question's derived representations (tokens, TF vector, embedding)
are precomputed at ingestion; serving touches only the incoming query's
text. Artifacts are JSON with an explicit format version and a content
fingerprint, verified on load.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calibration import CalibrationModel, SsrdCurve
from .embedding import DocumentEmbedding, EmbeddingProvider
from .errors import ArtifactFormatError, IngestError
from .preprocess import PreprocessConfig, preprocess
from .vectorspace import TfVector, tf_vectorize

INDEX_FORMAT_VERSION = 1
MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Question:
    id: str
    raw_text: str
    tokens: tuple[str, ...]
    tf: TfVector
    embedding: DocumentEmbedding
    oov_count: int

    @property
    def degenerate(self) -> bool:
        return not self.tokens


class QuestionIndex:
    """Immutable scored-against collection with config/provider binding."""

    def __init__(self, questions: dict[str, Question], config: PreprocessConfig,
                 provider: EmbeddingProvider):
        self.questions = questions
        self.config = config
        self.provider = provider
        self.preprocess_fingerprint = config.fingerprint()
        self.provider_id = provider.provider_id
        self.embedding_dimension = provider.dimension
        vocab = set()
        for q in questions.values():
            vocab.update(q.tf.entries)
        self.vocabulary_size = len(vocab)
        self.fingerprint = self._compute_fingerprint()

    def __len__(self) -> int:
        return len(self.questions)

    def _compute_fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.preprocess_fingerprint.encode())
        h.update(b"\x00")
        h.update(self.provider_id.encode())
        h.update(b"\x00")
        h.update(str(self.embedding_dimension).encode())
        for qid in sorted(self.questions):
            q = self.questions[qid]
            h.update(b"\x00q\x00")
            h.update(qid.encode())
            h.update(b"\x00")
            h.update(q.raw_text.encode())
            h.update(b"\x00")
            h.update("\x1f".join(q.tokens).encode())
            h.update(b"\x00")
            h.update(np.ascontiguousarray(q.embedding.vector, dtype=np.float64).tobytes())
            h.update(str(q.oov_count).encode())
        return h.hexdigest()

    def staleness_warnings(self, config: PreprocessConfig | None = None,
                           provider: EmbeddingProvider | None = None) -> list[str]:
        warnings = []
        if config is not None and config.fingerprint() != self.preprocess_fingerprint:
            warnings.append(
                "preprocess config differs from the one this index was built with; "
                "cached vectors may be stale"
            )
        if provider is not None and provider.provider_id != self.provider_id:
            warnings.append(
                f"embedding provider {provider.provider_id!r} differs from index "
                f"provider {self.provider_id!r}"
            )
        return warnings


def _build_question(qid: str, text: str, config: PreprocessConfig,
                    provider: EmbeddingProvider) -> Question:
    tokens = tuple(preprocess(text, config))
    return Question(
        id=qid,
        raw_text=text,
        tokens=tokens,
        tf=tf_vectorize(tokens),
        embedding=provider.embed(tokens),
        oov_count=provider.oov_count(tokens),
    )


def _read_corpus_rows(path: Path, fmt: str) -> list[tuple[int, str, str, str]]:
    """Yield (row_number, id, title, body) tuples; format errors collected
    by the caller via exceptions carrying row numbers."""
    rows = []
    if fmt == "csv":
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header not in (["id", "title"], ["id", "title", "body"]):
                raise IngestError([f"{path}:1: expected header 'id,title[,body]', got {header}"])
            for row_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise IngestError([f"{path}:{row_no}: expected {len(header)} fields, got {len(row)}"])
                body = row[2] if len(row) == 3 else ""
                rows.append((row_no, row[0], row[1], body))
    elif fmt == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for row_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise IngestError([f"{path}:{row_no}: invalid JSON ({exc.msg})"]) from None
                if not isinstance(obj, dict) or "id" not in obj or "title" not in obj:
                    raise IngestError([f"{path}:{row_no}: object must have 'id' and 'title'"])
                rows.append((row_no, str(obj["id"]), str(obj["title"]), str(obj.get("body", ""))))
    else:
        raise ValueError(f"unknown corpus format {fmt!r}")
    return rows


def ingest_corpus(path: str | Path, fmt: str, config: PreprocessConfig,
                  provider: EmbeddingProvider, include_body: bool = False) -> QuestionIndex:
    """Build a fully precomputed index from a CSV or JSONL corpus.

    Any malformed, empty-id or duplicate-id row aborts ingestion; the
    raised IngestError lists every offending row.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError([f"{path}: corpus file not found"])
    rows = _read_corpus_rows(path, fmt)

    problems: list[str] = []
    seen: dict[str, int] = {}
    questions: dict[str, Question] = {}
    for row_no, qid, title, body in rows:
        if not qid:
            problems.append(f"{path}:{row_no}: empty id")
            continue
        if qid in seen:
            problems.append(
                f"{path}:{row_no}: duplicate id {qid!r} (first seen at row {seen[qid]})"
            )
            continue
        seen[qid] = row_no
        text = f"{title} {body}".strip() if include_body and body else title
        questions[qid] = _build_question(qid, text, config, provider)
    if problems:
        raise IngestError(problems)
    return QuestionIndex(questions, config, provider)


def save_index(index: QuestionIndex, path: str | Path) -> None:
    doc = {
        "format_version": INDEX_FORMAT_VERSION,
        "kind": "qsim-index",
        "fingerprint": index.fingerprint,
        "preprocess_fingerprint": index.preprocess_fingerprint,
        "provider_id": index.provider_id,
        "embedding_dimension": index.embedding_dimension,
        "vocabulary_size": index.vocabulary_size,
        "questions": [
            {
                "id": q.id,
                "raw_text": q.raw_text,
                "tokens": list(q.tokens),
                "embedding": [float(x) for x in q.embedding.vector],
                "oov_count": q.oov_count,
            }
            for q in (index.questions[qid] for qid in sorted(index.questions))
        ],
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False), encoding="utf-8")


def load_index(path: str | Path, config: PreprocessConfig,
               provider: EmbeddingProvider) -> QuestionIndex:
    """Load and verify an index. The stored fingerprint must match the
    recomputed one; config/provider drift is reported via
    index.staleness_warnings afterwards."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArtifactFormatError(f"{path}: not a valid index file ({exc.msg})") from None
    if not isinstance(doc, dict) or doc.get("kind") != "qsim-index":
        raise ArtifactFormatError(f"{path}: not a qsim index file")
    if doc.get("format_version") != INDEX_FORMAT_VERSION:
        raise ArtifactFormatError(
            f"{path}: unsupported index format version {doc.get('format_version')!r} "
            f"(expected {INDEX_FORMAT_VERSION})"
        )
    questions = {}
    for entry in doc["questions"]:
        tokens = tuple(entry["tokens"])
        questions[entry["id"]] = Question(
            id=entry["id"],
            raw_text=entry["raw_text"],
            tokens=tokens,
            tf=tf_vectorize(tokens),
            embedding=DocumentEmbedding(np.array(entry["embedding"], dtype=np.float64)),
            oov_count=entry["oov_count"],
        )
    index = QuestionIndex.__new__(QuestionIndex)
    index.questions = questions
    index.config = config
    index.provider = provider
    index.preprocess_fingerprint = doc["preprocess_fingerprint"]
    index.provider_id = doc["provider_id"]
    index.embedding_dimension = doc["embedding_dimension"]
    index.vocabulary_size = doc["vocabulary_size"]
    index.fingerprint = doc["fingerprint"]
    recomputed = index._compute_fingerprint()
    if recomputed != doc["fingerprint"]:
        raise ArtifactFormatError(
            f"{path}: fingerprint mismatch (stored {doc['fingerprint'][:12]}..., "
            f"recomputed {recomputed[:12]}...); file corrupt or config drift"
        )
    return index


def save_model(model: CalibrationModel, path: str | Path) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": "qsim-model",
        "optimal_lambda": model.optimal_lambda,
        "step_size": model.step_size,
        "index_fingerprint": model.index_fingerprint,
        "created_at": model.created_at,
        "per_set": [
            {
                "probe_query": probe,
                "best_lambda": best,
                "curve": [[lam, ssrd_value] for lam, ssrd_value in curve.points],
            }
            for probe, best, curve in model.per_set
        ],
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False), encoding="utf-8")


def load_model(path: str | Path) -> CalibrationModel:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path}: model file not found")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArtifactFormatError(f"{path}: not a valid model file ({exc.msg})") from None
    if not isinstance(doc, dict) or doc.get("kind") != "qsim-model":
        raise ArtifactFormatError(f"{path}: not a qsim model file")
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ArtifactFormatError(
            f"{path}: unsupported model format version {doc.get('format_version')!r} "
            f"(expected {MODEL_FORMAT_VERSION})"
        )
    per_set = tuple(
        (
            entry["probe_query"],
            entry["best_lambda"],
            SsrdCurve(tuple((lam, int(s)) for lam, s in entry["curve"])),
        )
        for entry in doc["per_set"]
    )
    return CalibrationModel(
        optimal_lambda=doc["optimal_lambda"],
        step_size=doc["step_size"],
        per_set=per_set,
        index_fingerprint=doc["index_fingerprint"],
        created_at=doc["created_at"],
    )
