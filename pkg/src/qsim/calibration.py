"""Lambda calibration from admin rank files.

For each (probe query, ranked file) set the ranked questions are re-ranked
by the fused score at every grid value of lambda; the Sum of Squared Rank
Difference (SSRD) between predicted and admin ranks picks the best lambda
per set, and the final lambda is the mean of the per-set winners.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from . import fusion
from .errors import RankedFileError
from .preprocess import preprocess

if TYPE_CHECKING:
    from .store import QuestionIndex

DEFAULT_STEP_SIZE = 0.1


@dataclass(frozen=True)
class RankedSet:
    """One probe query plus admin-assigned ranks over a question subset."""

    probe_query: str
    assignments: dict[str, int]

    def validate(self, index: "QuestionIndex", source: str = "ranked set") -> None:
        if len(self.assignments) < 2:
            raise RankedFileError(f"{source}: needs at least 2 ranked questions")
        ranks = list(self.assignments.values())
        if any(r < 1 for r in ranks):
            raise RankedFileError(f"{source}: ranks must be positive integers")
        if len(set(ranks)) != len(ranks):
            raise RankedFileError(f"{source}: assigned ranks must be distinct")
        for qid in self.assignments:
            if qid not in index.questions:
                raise RankedFileError(f"{source}: unknown question id {qid!r}")


@dataclass(frozen=True)
class DriverManifest:
    """Ordered (probe query, ranked file path) pairs; m = len(sets)."""

    sets: tuple[tuple[str, Path], ...]

    @property
    def m(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class SsrdCurve:
    points: tuple[tuple[float, int], ...]

    def minimum(self) -> int:
        return min(s for _, s in self.points)


@dataclass(frozen=True)
class CalibrationModel:
    optimal_lambda: float
    step_size: float
    per_set: tuple[tuple[str, float, SsrdCurve], ...]
    index_fingerprint: str
    created_at: str


def parse_ranked_file(path: str | Path, probe_query: str) -> RankedSet:
    """Ranked file: CSV with header 'question_id,assigned_rank'."""
    path = Path(path)
    if not path.exists():
        raise RankedFileError(f"{path}: ranked file not found")
    assignments: dict[str, int] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["question_id", "assigned_rank"]:
            raise RankedFileError(f"{path}:1: expected header 'question_id,assigned_rank'")
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise RankedFileError(f"{path}:{row_no}: expected 2 fields, got {len(row)}")
            qid, rank_text = row
            try:
                rank = int(rank_text)
            except ValueError:
                raise RankedFileError(f"{path}:{row_no}: non-integer rank {rank_text!r}") from None
            if rank < 1:
                raise RankedFileError(f"{path}:{row_no}: rank must be >= 1")
            if qid in assignments:
                raise RankedFileError(f"{path}:{row_no}: duplicate question id {qid!r}")
            assignments[qid] = rank
    return RankedSet(probe_query, assignments)


def parse_driver_manifest(path: str | Path) -> DriverManifest:
    """Driver file: CSV with header 'probe_query,ranked_file'; ranked-file
    paths are resolved relative to the manifest's directory."""
    path = Path(path)
    if not path.exists():
        raise RankedFileError(f"{path}: driver manifest not found")
    sets = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["probe_query", "ranked_file"]:
            raise RankedFileError(f"{path}:1: expected header 'probe_query,ranked_file'")
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise RankedFileError(f"{path}:{row_no}: expected 2 fields, got {len(row)}")
            probe_query, ranked_file = row
            sets.append((probe_query, path.parent / ranked_file))
    if not sets:
        raise RankedFileError(f"{path}: manifest contains no sets")
    return DriverManifest(tuple(sets))


def ssrd(predicted: dict[str, int], assigned: dict[str, int]) -> int:
    """Sum over assigned ids of (predicted rank - assigned rank)^2."""
    total = 0
    for qid, assigned_rank in assigned.items():
        if qid not in predicted:
            raise RankedFileError(f"no predicted rank for assigned id {qid!r}")
        total += (predicted[qid] - assigned_rank) ** 2
    return total


def evaluate_lambda(ranked: RankedSet, index: "QuestionIndex", lam: float) -> int:
    """SSRD of the fused ranking of the set's own questions at one lambda."""
    tokens = preprocess(ranked.probe_query, index.config)
    result = fusion.rank_candidates(
        tokens, sorted(ranked.assignments), index, lam, query_text=ranked.probe_query
    )
    predicted = {c.question_id: c.rank for c in result.candidates}
    return ssrd(predicted, ranked.assignments)


def lambda_grid(step_size: float) -> list[float]:
    """Grid 0, step, 2*step, ... capped and always terminated at 1.0.

    Points are i * step (not accumulated) to avoid float drift; 1.0 is
    appended when the step does not divide 1 evenly, so both standalone
    systems are always evaluated.
    """
    if not 0.0 < step_size <= 1.0:
        raise ValueError("step_size must be in (0, 1]")
    grid = []
    i = 0
    while (point := round(i * step_size, 12)) < 1.0:
        grid.append(point)
        i += 1
    grid.append(1.0)
    return grid


def find_best_lambda(ranked: RankedSet, index: "QuestionIndex",
                     step_size: float) -> tuple[float, SsrdCurve]:
    """Evaluate every grid point; smallest lambda achieving the minimum
    SSRD wins (deterministic tie-break)."""
    points = tuple(
        (lam, evaluate_lambda(ranked, index, lam))
        for lam in lambda_grid(step_size)
    )
    best_lambda = min(points, key=lambda p: (p[1], p[0]))[0]
    return best_lambda, SsrdCurve(points)


def calibrate(manifest: DriverManifest, index: "QuestionIndex",
              step_size: float = DEFAULT_STEP_SIZE) -> CalibrationModel:
    """Run the full grid search over every set and average the winners."""
    per_set = []
    for probe_query, ranked_path in manifest.sets:
        ranked = parse_ranked_file(ranked_path, probe_query)
        ranked.validate(index, source=str(ranked_path))
        best, curve = find_best_lambda(ranked, index, step_size)
        per_set.append((probe_query, best, curve))
    optimal = sum(best for _, best, _ in per_set) / len(per_set)
    return CalibrationModel(
        optimal_lambda=optimal,
        step_size=step_size,
        per_set=tuple(per_set),
        index_fingerprint=index.fingerprint,
        created_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )
