"""Command-line surface: ingest -> calibrate -> query / eval / histogram /
serve.

Exit codes: 0 success, 1 validation or input error, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import calibration, evalreport, fusion, store
from .embedding import HashEmbedder, TableEmbedder, load_word_vectors
from .errors import QsimError
from .preprocess import PreprocessConfig, default_stopwords, load_stopwords, preprocess

DEFAULT_FALLBACK_LAMBDA = 0.5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsim",
        description="Question suggestion engine with calibrated syntactic/semantic fusion",
    )
    parser.add_argument("--index", type=Path, default=Path("qsim-index.json"),
                        help="index file path (default: %(default)s)")
    parser.add_argument("--model", type=Path, default=Path("qsim-model.json"),
                        help="calibration model file path (default: %(default)s)")
    parser.add_argument("--stopwords", type=Path, default=None,
                        help="stop-word list file (default: bundled English list)")
    parser.add_argument("--stemmer", choices=["porter", "none"], default="porter")
    parser.add_argument("--embedder", choices=["wordvec", "hash"], default="hash")
    parser.add_argument("--word-vectors", type=Path, default=None,
                        help="word-vector text file (required with --embedder wordvec)")
    parser.add_argument("--hash-dim", type=int, default=64)
    parser.add_argument("--hash-seed", type=int, default=0)
    parser.add_argument("--step-size", type=float, default=calibration.DEFAULT_STEP_SIZE)
    parser.add_argument("--top-k", type=int, default=None)
    parser.add_argument("--threshold", type=float, default=None)
    parser.add_argument("--lambda", dest="lambda_override", type=float, default=None,
                        help="manual lambda override (skips the calibrated model)")
    parser.add_argument("--format", choices=["text", "csv"], default="text")

    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="build an index from a corpus file")
    p_ingest.add_argument("corpus", type=Path)
    p_ingest.add_argument("--corpus-format", choices=["csv", "jsonl"], default="csv")
    p_ingest.add_argument("--include-body", action="store_true",
                          help="score against title + body instead of title only")

    p_cal = sub.add_parser("calibrate", help="learn lambda from a driver manifest")
    p_cal.add_argument("manifest", type=Path)
    p_cal.add_argument("--curves-dir", type=Path, default=None,
                       help="directory for per-set SSRD curve CSVs")

    p_query = sub.add_parser("query", help="rank indexed questions against a query")
    p_query.add_argument("text")

    p_eval = sub.add_parser("eval", help="error-reduction report over a manifest")
    p_eval.add_argument("manifest", type=Path)
    p_eval.add_argument("--report-csv", type=Path, default=None)

    p_hist = sub.add_parser("histogram", help="score distribution of a probe vs the corpus")
    p_hist.add_argument("probe")
    p_hist.add_argument("--method", choices=["syntactic", "semantic", "combined"],
                        default="syntactic")
    p_hist.add_argument("--out", type=Path, default=None, help="histogram CSV output path")

    p_serve = sub.add_parser("serve", help="run the HTTP suggestion service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--default-top-k", type=int, default=10)

    return parser


def make_config(args) -> PreprocessConfig:
    if args.stopwords is not None:
        stopwords = load_stopwords(args.stopwords)
    else:
        stopwords = default_stopwords()
    return PreprocessConfig(stopwords=stopwords, stemmer=args.stemmer)


def make_provider(args):
    if args.embedder == "wordvec":
        if args.word_vectors is None:
            raise QsimError("--embedder wordvec requires --word-vectors")
        if not args.word_vectors.exists():
            raise QsimError(f"word-vector file not found: {args.word_vectors}")
        return TableEmbedder(load_word_vectors(args.word_vectors))
    return HashEmbedder(args.hash_dim, args.hash_seed)


def _load_index(args) -> store.QuestionIndex:
    if not args.index.exists():
        raise QsimError(f"index file not found: {args.index} (run 'qsim ingest' first)")
    config = make_config(args)
    provider = make_provider(args)
    index = store.load_index(args.index, config, provider)
    for warning in index.staleness_warnings(config, provider):
        print(f"WARNING: {warning}", file=sys.stderr)
    return index


def _resolve_lambda(args, index) -> float:
    if args.lambda_override is not None:
        if not 0.0 <= args.lambda_override <= 1.0:
            raise QsimError("--lambda must be in [0, 1]")
        return args.lambda_override
    if args.model.exists():
        model = store.load_model(args.model)
        if model.index_fingerprint != index.fingerprint:
            print("WARNING: calibration model is stale for this index; "
                  "consider recalibrating", file=sys.stderr)
        return model.optimal_lambda
    print(f"WARNING: no calibration model at {args.model}; "
          f"using default lambda {DEFAULT_FALLBACK_LAMBDA}", file=sys.stderr)
    return DEFAULT_FALLBACK_LAMBDA


def cmd_ingest(args) -> int:
    provider = make_provider(args)
    config = make_config(args)
    index = store.ingest_corpus(args.corpus, args.corpus_format, config, provider,
                                include_body=args.include_body)
    store.save_index(index, args.index)
    oov_total = sum(q.oov_count for q in index.questions.values())
    degenerate = sum(1 for q in index.questions.values() if q.degenerate)
    print(f"ingested {len(index)} questions into {args.index}")
    print(f"vocabulary size: {index.vocabulary_size}")
    print(f"out-of-vocabulary tokens: {oov_total}; degenerate questions: {degenerate}")
    print(f"index fingerprint: {index.fingerprint}")
    return 0


def cmd_calibrate(args) -> int:
    index = _load_index(args)
    manifest = calibration.parse_driver_manifest(args.manifest)
    model = calibration.calibrate(manifest, index, step_size=args.step_size)
    store.save_model(model, args.model)
    print(f"grid: {', '.join(f'{x:g}' for x in calibration.lambda_grid(args.step_size))}")
    for probe, best, _ in model.per_set:
        print(f"set {probe!r}: best lambda {best:g}")
    print(f"optimal lambda: {model.optimal_lambda:g}")
    print(f"model written to {args.model}")
    if args.curves_dir is not None:
        args.curves_dir.mkdir(parents=True, exist_ok=True)
        for i, (_, _, curve) in enumerate(model.per_set, start=1):
            curve_path = args.curves_dir / f"set{i:03d}.csv"
            evalreport.export_ssrd_curve(curve, curve_path)
            print(f"curve written to {curve_path}")
    return 0


def cmd_query(args) -> int:
    index = _load_index(args)
    lam = _resolve_lambda(args, index)
    tokens = preprocess(args.text, index.config)
    result = fusion.rank_candidates(tokens, sorted(index.questions), index, lam,
                                    query_text=args.text)
    if args.top_k is not None and args.threshold is not None:
        raise QsimError("give at most one of --top-k / --threshold")
    if args.top_k is not None:
        result = fusion.apply_cutoff(result, top_k=args.top_k)
    elif args.threshold is not None:
        result = fusion.apply_cutoff(result, threshold=args.threshold)

    if args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["rank", "id", "s1", "s2", "combined"])
        for c in result.candidates:
            writer.writerow([c.rank, c.question_id, repr(c.s1), repr(c.s2), repr(c.combined)])
        sys.stdout.write(out.getvalue())
    else:
        print(f"lambda: {lam:g}")
        print(f"{'rank':>4} {'id':<16} {'s1':>8} {'s2':>8} {'combined':>8}")
        for c in result.candidates:
            print(f"{c.rank:>4} {c.question_id:<16} {c.s1:>8.4f} {c.s2:>8.4f} {c.combined:>8.4f}")
    return 0


def cmd_eval(args) -> int:
    index = _load_index(args)
    if not args.model.exists():
        raise QsimError(f"model file not found: {args.model} (run 'qsim calibrate' first)")
    model = store.load_model(args.model)
    manifest = calibration.parse_driver_manifest(args.manifest)
    report = evalreport.error_reduction_report(manifest, index, model)
    print(evalreport.format_report_table(report))
    if args.report_csv is not None:
        evalreport.export_report_csv(report, args.report_csv)
        print(f"report CSV written to {args.report_csv}")
    return 0


def cmd_histogram(args) -> int:
    index = _load_index(args)
    lam = None
    if args.method == "combined":
        lam = _resolve_lambda(args, index)
    histogram = evalreport.score_histogram(index, args.probe, args.method, lam=lam)
    print(f"{'bin':<12} count")
    for i, count in enumerate(histogram.counts):
        print(f"[{evalreport.BIN_EDGES[i]:.1f}, {evalreport.BIN_EDGES[i+1]:.1f}{')' if i < 9 else ']'} {count}")
    if args.out is not None:
        evalreport.export_histogram(histogram, args.out)
        print(f"histogram CSV written to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServingState, create_app

    index = _load_index(args)
    model = None
    if args.lambda_override is not None:
        lam = args.lambda_override
    elif args.model.exists():
        model = store.load_model(args.model)
        lam = model.optimal_lambda
    else:
        print(f"WARNING: no calibration model at {args.model}; "
              f"using default lambda {DEFAULT_FALLBACK_LAMBDA}", file=sys.stderr)
        lam = DEFAULT_FALLBACK_LAMBDA
    state = ServingState(index=index, lambda_used=lam, model=model,
                         default_top_k=args.default_top_k)
    app = create_app(state)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "calibrate": cmd_calibrate,
    "query": cmd_query,
    "eval": cmd_eval,
    "histogram": cmd_histogram,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (QsimError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
