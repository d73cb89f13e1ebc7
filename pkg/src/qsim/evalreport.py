"""Evaluation artifacts: score histograms, SSRD-vs-lambda curve export,
and error-reduction reports against a random-ranking baseline.

The baseline is the expected SSRD of a uniformly random permutation of an
n-item ranked set, (n^3 - n) / 6 in closed form, so reports are
deterministic without any seed management.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

from . import calibration, fusion
from .calibration import CalibrationModel, DriverManifest, SsrdCurve
from .errors import RankedFileError
from .preprocess import preprocess
from .vectorspace import cosine_tf, tf_vectorize
from .embedding import cosine_semantic

if TYPE_CHECKING:
    from .store import QuestionIndex

BIN_EDGES = tuple(i / 10 for i in range(11))


@dataclass(frozen=True)
class Histogram:
    """10 uniform bins on [0, 1]; the final bin includes 1.0."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != 10:
            raise ValueError("histogram must have exactly 10 bins")

    @property
    def total(self) -> int:
        return sum(self.counts)


def histogram_of(scores: list[float]) -> Histogram:
    counts = [0] * 10
    for s in scores:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"score out of range: {s}")
        counts[min(int(s * 10), 9)] += 1
    return Histogram(tuple(counts))


def score_histogram(index: "QuestionIndex", probe: str, method: str,
                    lam: float | None = None) -> Histogram:
    """Score every indexed question against the probe and bin the scores.

    method: 'syntactic', 'semantic' or 'combined' (needs lam).
    """
    if method not in ("syntactic", "semantic", "combined"):
        raise ValueError(f"unknown method {method!r}")
    if method == "combined" and lam is None:
        raise ValueError("combined method requires a lambda")
    tokens = preprocess(probe, index.config)
    probe_tf = tf_vectorize(tokens)
    probe_emb = index.provider.embed(tokens)
    scores = []
    for q in index.questions.values():
        if method == "syntactic":
            scores.append(cosine_tf(probe_tf, q.tf))
        elif method == "semantic":
            scores.append(cosine_semantic(probe_emb, q.embedding))
        else:
            s1 = cosine_tf(probe_tf, q.tf)
            s2 = cosine_semantic(probe_emb, q.embedding)
            scores.append(fusion.combine(s1, s2, lam))
    return histogram_of(scores)


def random_baseline_ssrd(set_sizes: list[int]) -> float:
    """Mean over sets of the expected SSRD of a uniformly random ranking."""
    if not set_sizes:
        raise ValueError("need at least one set size")
    if any(n < 2 for n in set_sizes):
        raise ValueError("set sizes must be >= 2")
    return sum((n**3 - n) / 6 for n in set_sizes) / len(set_sizes)


@dataclass(frozen=True)
class MethodRow:
    method: str
    mean_ssrd: float
    baseline_ssrd: float
    error_reduction_percent: float


@dataclass(frozen=True)
class ErrorReductionReport:
    rows: tuple[MethodRow, ...]
    lambda_used: float
    warnings: tuple[str, ...] = field(default_factory=tuple)


def _error_reduction(baseline: float, mean_ssrd: float) -> float:
    if baseline <= 0:
        raise ValueError("baseline SSRD must be positive")
    return 100.0 * (baseline - mean_ssrd) / baseline


def error_reduction_report(manifest: DriverManifest, index: "QuestionIndex",
                           model: CalibrationModel) -> ErrorReductionReport:
    """Evaluate every set at lambda 1.0 (S1), 0.0 (S2) and the calibrated
    optimum (S_lambda) and compare each mean SSRD to the random baseline."""
    if manifest.m == 0:
        raise RankedFileError("empty manifest")
    warnings = []
    if model.index_fingerprint != index.fingerprint:
        warnings.append(
            "calibration model was built against a different index "
            f"({model.index_fingerprint[:12]}... vs {index.fingerprint[:12]}...)"
        )

    ranked_sets = []
    for probe_query, ranked_path in manifest.sets:
        ranked = calibration.parse_ranked_file(ranked_path, probe_query)
        ranked.validate(index, source=str(ranked_path))
        ranked_sets.append(ranked)

    baseline = random_baseline_ssrd([len(r.assignments) for r in ranked_sets])
    rows = []
    for method, lam in (("S1", 1.0), ("S2", 0.0), ("S_lambda", model.optimal_lambda)):
        mean_ssrd = sum(
            calibration.evaluate_lambda(r, index, lam) for r in ranked_sets
        ) / len(ranked_sets)
        rows.append(MethodRow(method, mean_ssrd, baseline, _error_reduction(baseline, mean_ssrd)))
    return ErrorReductionReport(tuple(rows), lambda_used=model.optimal_lambda,
                                warnings=tuple(warnings))


def _format_lambda(lam: float) -> str:
    return f"{lam:g}"


def export_ssrd_curve(curve: SsrdCurve, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "ssrd"])
        for lam, ssrd_value in curve.points:
            writer.writerow([_format_lambda(lam), ssrd_value])


def export_histogram(histogram: Histogram, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_start", "bin_end", "count"])
        for i, count in enumerate(histogram.counts):
            writer.writerow([_format_lambda(BIN_EDGES[i]), _format_lambda(BIN_EDGES[i + 1]), count])


def export_report_csv(report: ErrorReductionReport, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "mean_ssrd", "baseline_ssrd", "error_reduction_percent", "lambda"])
        for row in report.rows:
            lam = _format_lambda(report.lambda_used) if row.method == "S_lambda" else ""
            writer.writerow([row.method, repr(row.mean_ssrd), repr(row.baseline_ssrd),
                             repr(row.error_reduction_percent), lam])


def format_report_table(report: ErrorReductionReport) -> str:
    """Plain-text table: method, mean SSRD, baseline, reduction percent."""
    lines = [f"{'Method':<10} {'Mean SSRD':>12} {'Baseline':>12} {'Reduction %':>12}"]
    for row in report.rows:
        lines.append(
            f"{row.method:<10} {row.mean_ssrd:>12.4f} {row.baseline_ssrd:>12.4f} "
            f"{row.error_reduction_percent:>12.2f}"
        )
    lines.append(f"Optimal lambda: {report.lambda_used:g}")
    for warning in report.warnings:
        lines.append(f"WARNING: {warning}")
    return "\n".join(lines)
