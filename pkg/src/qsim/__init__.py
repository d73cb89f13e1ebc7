"""qsim: question suggestion by calibrated fusion of term-frequency and
embedding cosine similarity."""

from .preprocess import PreprocessConfig, preprocess
from .vectorspace import TfVector, tf_vectorize, cosine_tf
from .embedding import (
    DocumentEmbedding,
    HashEmbedder,
    TableEmbedder,
    WordVectorTable,
    cosine_semantic,
    embed_mean,
    load_word_vectors,
)
from .fusion import ScoredCandidate, SuggestionResult, apply_cutoff, combine, rank_candidates
from .calibration import (
    CalibrationModel,
    DriverManifest,
    RankedSet,
    SsrdCurve,
    calibrate,
    evaluate_lambda,
    find_best_lambda,
    lambda_grid,
    parse_driver_manifest,
    parse_ranked_file,
    ssrd,
)
from .store import (
    Question,
    QuestionIndex,
    ingest_corpus,
    load_index,
    load_model,
    save_index,
    save_model,
)
from .evalreport import (
    ErrorReductionReport,
    Histogram,
    error_reduction_report,
    export_ssrd_curve,
    random_baseline_ssrd,
    score_histogram,
)

__version__ = "0.1.0"
