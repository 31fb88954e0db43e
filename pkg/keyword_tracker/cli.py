"""
Command-line interface for the keyword tracker.

Every pipeline stage is a subcommand that reads and writes files in the
documented formats, so stages can be run, inspected and resumed one at a
time. Settings resolve from defaults, then an optional flat config file,
then command-line flags; the resolved configuration is printed to
standard error on every run.

Exit codes: 0 success, 1 usage or configuration error, 2 data or format
error, 3 numeric failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO

import numpy as np
from pydantic import ValidationError

from keyword_tracker.clustering import (
    CLUSTER_COLUMNS,
    PROJECTION_COLUMNS,
    cluster_report_rows,
    kmeans,
    kmeans_restarts,
    projection_rows,
    representative,
    select_clusters,
    tsne,
)
from keyword_tracker.compare import compare_domains, report_to_table
from keyword_tracker.cooccurrence import build_table, load_binary, save_binary
from keyword_tracker.core.config import (
    DocumentFormat,
    DriftConfig,
    ExportMode,
    ExtractMethod,
    KMeansInit,
    PipelineConfig,
    RepresentativeMethod,
    TableFormat,
    Weighting,
)
from keyword_tracker.corpus import (
    Vocabulary,
    build_vocabulary,
    iter_token_ids,
    read_documents,
    write_documents,
)
from keyword_tracker.embedding import (
    GloVeTrainer,
    analogy,
    export_vectors,
    init_model,
    load_text,
    nearest_neighbors,
    save_checkpoint,
    save_text,
    wordcloud_export,
)
from keyword_tracker.exceptions import (
    ConfigurationError,
    KeywordTrackerError,
    NumericError,
    UsageError,
)
from keyword_tracker.formatters import CSVFormatter, read_csv
from keyword_tracker.keywords import (
    CollectorPort,
    FileCollector,
    KeywordEngine,
    extract_candidates,
    load_stoplist,
    simulate_drift,
    write_rounds,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class TrackerArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _csv_list(value: str) -> List[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _common_options() -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand name."""
    common = TrackerArgumentParser(add_help=False)
    group = common.add_argument_group("Global Options")
    # SUPPRESS keeps a subcommand's unset option from clobbering a global one
    group.add_argument("--config", default=argparse.SUPPRESS, help="Flat 'key = value' config file")
    group.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Global seed (default: 0)")
    group.add_argument(
        "--threads", type=int, default=argparse.SUPPRESS, help="Worker threads (default: 1)"
    )
    group.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=argparse.SUPPRESS,
        help="Logging level (default: INFO)",
    )
    group.add_argument(
        "--progress", action="store_true", default=argparse.SUPPRESS, help="Show progress bars"
    )
    return common


def _add_tokenizer_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Tokenizer")
    for name, help_text in [
        ("lowercase", "Lowercase tokens (default: on)"),
        ("keep-hashtags", "Keep the leading '#' of hashtags (default: on)"),
        ("drop-urls", "Drop URL tokens (default: on)"),
        ("drop-mentions", "Drop @mentions (default: on)"),
    ]:
        group.add_argument(f"--{name}", action=argparse.BooleanOptionalAction, default=None, help=help_text)
    group.add_argument(
        "--preserve-case", dest="lowercase", action="store_false", default=None, help="Same as --no-lowercase"
    )
    group.add_argument("--min-token-len", type=int, default=None, help="Minimum token length (default: 2)")
    group.add_argument("--min-count", type=int, default=None, help="Minimum corpus frequency (default: 5)")


def _add_cooccur_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Co-occurrence")
    group.add_argument("--window", type=int, default=None, help="Context window (default: 10)")
    group.add_argument(
        "--weighting",
        choices=[w.value for w in Weighting],
        default=None,
        help=f"Pair weighting (default: {Weighting.INVERSE_DISTANCE.value})",
    )


def _add_train_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Training")
    group.add_argument("--dim", type=int, default=None, help="Vector dimension (default: 50)")
    group.add_argument("--epochs", type=int, default=None, help="Training epochs (default: 25)")
    group.add_argument("--eta", type=float, default=None, help="Initial learning rate (default: 0.05)")
    group.add_argument("--x-max", type=float, default=None, help="Weighting cap (default: 100)")
    group.add_argument("--alpha", type=float, default=None, help="Weighting exponent (default: 0.75)")
    group.add_argument(
        "--gradient-clip", type=float, default=None, help="Clip for the per-term factor (default: 100)"
    )
    group.add_argument(
        "--export-mode",
        choices=[m.value for m in ExportMode],
        default=None,
        help=f"Vectors to export (default: {ExportMode.SUM.value})",
    )


def _add_cluster_options(parser: argparse.ArgumentParser, k_flag: str = "--k") -> None:
    group = parser.add_argument_group("Clustering")
    group.add_argument(k_flag, dest="clusters", type=int, default=None, help="Number of clusters (default: 100)")
    group.add_argument("--max-iter", dest="kmeans_max_iter", type=int, default=None, help="Lloyd iteration cap (default: 300)")
    group.add_argument("--tol", dest="kmeans_tol", type=float, default=None, help="Minimum wcss improvement (default: 1e-4)")
    group.add_argument(
        "--init",
        dest="kmeans_init",
        choices=[i.value for i in KMeansInit],
        default=None,
        help=f"Centroid seeding (default: {KMeansInit.KMEANSPP.value})",
    )
    group.add_argument(
        "--normalize", action=argparse.BooleanOptionalAction, default=None, help="Length-normalize vectors first"
    )


def _add_extract_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Extraction")
    group.add_argument(
        "--method",
        dest="extract_method",
        choices=[m.value for m in ExtractMethod],
        default=None,
        help=f"Extraction avenue (default: {ExtractMethod.BOTH.value})",
    )
    group.add_argument("--per-cluster", type=int, default=None, help="Representatives per cluster (default: 1)")
    group.add_argument(
        "--representative",
        choices=[m.value for m in RepresentativeMethod],
        default=None,
        help=f"Representative rule (default: {RepresentativeMethod.CENTROID_COSINE.value})",
    )
    group.add_argument(
        "--raw-counts",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Score co-occurrence by unweighted counts",
    )
    group.add_argument("--stoplist", type=Path, default=None, help="Stoplist file (default: bundled list)")


def build_parser() -> TrackerArgumentParser:
    """Build the argument parser with every subcommand."""
    common = _common_options()
    parser = TrackerArgumentParser(
        prog="keyword-tracker",
        description="Track drifting social-media keywords with GloVe embeddings",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def command(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text, parents=[common])
        p.set_defaults(handler=handler)
        return p

    p = command("ingest", cmd_ingest, "Read a corpus and build its vocabulary")
    p.add_argument("--input", type=Path, required=True, help="Corpus file")
    p.add_argument("--format", choices=[f.value for f in DocumentFormat], default=DocumentFormat.JSONL.value)
    p.add_argument("--vocab", type=Path, required=True, help="Vocabulary TSV to write")
    p.add_argument("--documents-out", type=Path, help="Write the parsed documents as jsonl")
    _add_tokenizer_options(p)

    p = command("cooccur", cmd_cooccur, "Count co-occurrences into a binary table")
    p.add_argument("--input", type=Path, required=True, help="Corpus file")
    p.add_argument("--format", choices=[f.value for f in DocumentFormat], default=DocumentFormat.JSONL.value)
    p.add_argument("--vocab", type=Path, required=True, help="Vocabulary TSV")
    p.add_argument("--output", type=Path, required=True, help="Binary table to write")
    _add_tokenizer_options(p)
    _add_cooccur_options(p)

    p = command("train", cmd_train, "Train GloVe vectors on a co-occurrence table")
    p.add_argument("--table", type=Path, required=True, help="Binary co-occurrence table")
    p.add_argument("--vocab", type=Path, required=True, help="Vocabulary TSV")
    p.add_argument("--output", type=Path, required=True, help="Vectors text file to write")
    p.add_argument("--checkpoint", type=Path, help="Also write the full model checkpoint")
    p.add_argument("--loss-trace", type=Path, help="Write per-epoch losses as CSV")
    p.add_argument("--domain", default="default", help="Domain label of the vectors")
    _add_train_options(p)

    p = command("neighbors", cmd_neighbors, "Nearest neighbors of a token")
    p.add_argument("--vectors", type=Path, required=True, help="Vectors text file")
    p.add_argument("--query", required=True, help="Query token")
    p.add_argument("--k", dest="neighbors_k", type=int, default=None, help="Neighbors to list (default: 10)")
    p.add_argument("--output", type=Path, help="Write word-cloud CSV here instead of stdout")

    p = command("analogy", cmd_analogy, "Solve a : b :: c : ?")
    p.add_argument("--vectors", type=Path, required=True, help="Vectors text file")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--k", dest="neighbors_k", type=int, default=None, help="Answers to list (default: 10)")

    p = command("cluster", cmd_cluster, "K-means clustering of a vector space")
    p.add_argument("--vectors", type=Path, required=True, help="Vectors text file")
    p.add_argument("--output", type=Path, required=True, help="Cluster report CSV to write")
    p.add_argument("--restarts", type=int, default=1, help="Keep the best of this many seeded runs")
    p.add_argument("--representatives", type=Path, help="Write cluster_id,size,representative CSV")
    _add_cluster_options(p)

    p = command("project", cmd_project, "t-SNE projection of clustered vectors")
    p.add_argument("--vectors", type=Path, required=True, help="Vectors text file")
    p.add_argument("--clusters", dest="cluster_report", type=Path, required=True, help="Cluster report CSV")
    p.add_argument("--output", type=Path, required=True, help="Projection CSV to write")
    p.add_argument("--cluster-id", type=int, action="append", default=[], help="Project this cluster (repeatable)")
    p.add_argument("--cluster-of", action="append", default=[], help="Project the cluster of this token (repeatable)")
    p.add_argument("--perplexity", type=float, default=None, help="Target perplexity (default: 30)")
    p.add_argument("--iters", dest="tsne_iters", type=int, default=None, help="Iterations (default: 1000)")

    p = command("extract", cmd_extract, "Extract candidate keywords for a seed set")
    p.add_argument("--vocab", type=Path, required=True, help="Vocabulary TSV")
    p.add_argument("--table", type=Path, required=True, help="Binary co-occurrence table")
    p.add_argument("--vectors", type=Path, required=True, help="Vectors text file")
    p.add_argument("--seeds", type=_csv_list, required=True, help="Comma-separated seed keywords")
    p.add_argument("--input", type=Path, help="Corpus file, needed by --raw-counts on a weighted table")
    p.add_argument("--k", dest="extract_k", type=int, default=None, help="Co-occurrence candidates (default: 25)")
    p.add_argument("--clusters", type=int, default=None, help="Clusters for the clustering avenue (default: 100)")
    p.add_argument("--output", type=Path, help="Write candidates CSV here instead of stdout")
    _add_extract_options(p)
    _add_tokenizer_options(p)

    p = command("iterate", cmd_iterate, "Run the multi-round collect-train-extract loop")
    p.add_argument("--seeds", type=_csv_list, required=True, help="Comma-separated seed keywords")
    p.add_argument("--collector", required=True, help="file:<path> or sim:<drift.json>")
    p.add_argument("--history", type=Path, required=True, help="History JSON-lines file to write")
    p.add_argument("--rounds", type=int, default=None, help="Rounds to run (default: 5)")
    p.add_argument("--kmax", type=int, default=None, help="Keyword set capacity (default: 100)")
    p.add_argument("--decay", type=float, default=None, help="Per-round score decay (default: 0.7)")
    p.add_argument("--query-limit", type=int, default=None, help="Documents per query (default: 1000)")
    p.add_argument("--fresh-corpus", action=argparse.BooleanOptionalAction, default=None, help="Retrain on each round's documents only")
    p.add_argument("--k", dest="extract_k", type=int, default=None, help="Co-occurrence candidates (default: 25)")
    p.add_argument("--clusters", type=int, default=None, help="Clusters for the clustering avenue (default: 100)")
    _add_extract_options(p)
    _add_tokenizer_options(p)
    _add_cooccur_options(p)
    _add_train_options(p)

    p = command("compare", cmd_compare, "Compare probe-word neighbors across domains")
    p.add_argument("--space", action="append", required=True, help="domain=path (repeatable)")
    p.add_argument("--probes", default=None, help="Comma-separated probe words (default: female,male)")
    p.add_argument("--k", dest="compare_k", type=int, default=None, help="Neighbors per probe (default: 9)")
    p.add_argument("--format", choices=[f.value for f in TableFormat], default=TableFormat.CSV.value)
    p.add_argument("--output", type=Path, help="Write the report here instead of stdout")

    p = command("simulate", cmd_simulate, "Write a synthetic drifting corpus as round files")
    p.add_argument("--drift", type=Path, required=True, help="Drift configuration JSON")
    p.add_argument("--output", type=Path, required=True, help="Directory for round-<r>.jsonl files")

    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Defaults, then the config file, then command-line flags."""
    config_path = getattr(args, "config", None)
    config = PipelineConfig.from_file(config_path) if config_path else PipelineConfig()
    overrides = {
        name: getattr(args, name) for name in PipelineConfig.model_fields if hasattr(args, name)
    }
    return config.with_overrides(overrides)


def _emit(rows: Sequence[Dict[str, Any]], columns: Sequence[str], output: Optional[Path], out: TextIO) -> None:
    formatter = CSVFormatter()
    if output is None:
        out.write(formatter.format_rows(rows, columns))
    else:
        formatter.write(rows, columns, output)
        logger.info("Wrote %d row(s) to %s", len(rows), output)


def _load_vocab_and_table(vocab_path: Path, table_path: Path):
    vocab = Vocabulary.load_tsv(vocab_path)
    table = load_binary(table_path)
    if table.vocab_size != len(vocab):
        raise ConfigurationError(
            f"Table {table_path} covers {table.vocab_size} words but {vocab_path} has {len(vocab)}"
        )
    return vocab, table


def cmd_ingest(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    result = read_documents(args.input, args.format)
    vocab = build_vocabulary(result.documents, config.token_rules(), config.min_count)
    vocab.save_tsv(args.vocab)
    if args.documents_out:
        write_documents(args.documents_out, result.documents)
    logger.info(
        "Ingested %d documents (%d skipped): %d tokens, vocabulary %d",
        len(result.documents),
        result.skipped,
        vocab.total_tokens,
        len(vocab),
    )


def cmd_cooccur(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    docs = read_documents(args.input, args.format).documents
    vocab = Vocabulary.load_tsv(args.vocab)
    ids = iter_token_ids(docs, vocab, config.token_rules())
    table = build_table(ids, len(vocab), config.window, config.weighting, shards=config.threads)
    save_binary(table, args.output)


def cmd_train(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    vocab, table = _load_vocab_and_table(args.vocab, args.table)
    train_config = config.train_config()
    model = init_model(len(vocab), train_config.dim, train_config.seed)
    result = GloVeTrainer(train_config, progress=args.progress).train(model, table)
    space = export_vectors(result.model, vocab.tokens, config.export_mode, args.domain)
    save_text(space, args.output)
    if args.checkpoint:
        save_checkpoint(result.model, args.checkpoint)
    if args.loss_trace:
        rows = [{"epoch": 0, "loss": result.initial_loss}]
        rows += [{"epoch": e, "loss": loss} for e, loss in enumerate(result.losses, 1)]
        CSVFormatter().write(rows, ["epoch", "loss"], args.loss_trace)


def cmd_neighbors(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    space = load_text(args.vectors)
    if args.output:
        wordcloud_export(space, args.query, config.neighbors_k, args.output)
        return
    rows = [{"token": t, "similarity": s} for t, s in nearest_neighbors(space, args.query, config.neighbors_k)]
    _emit(rows, ["token", "similarity"], None, out)


def cmd_analogy(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    space = load_text(args.vectors)
    answers = analogy(space, args.a, args.b, args.c, max(config.neighbors_k, 1))
    _emit([{"token": t, "similarity": s} for t, s in answers], ["token", "similarity"], None, out)


def cmd_cluster(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    space = load_text(args.vectors)
    kc = config.kmeans_config()
    options = dict(max_iter=kc.max_iter, tol=kc.tol, init=kc.init, normalize=kc.normalize)
    if args.restarts > 1:
        result = kmeans_restarts(space.vectors, kc.k, args.restarts, seed=kc.seed, **options)
    else:
        result = kmeans(space.vectors, kc.k, seed=kc.seed, **options)
    _emit(cluster_report_rows(space, result), CLUSTER_COLUMNS, args.output, out)
    if args.representatives:
        sizes = result.sizes()
        rows = [
            {"cluster_id": cid, "size": int(sizes[cid]), "representative": representative(space, result, cid)}
            for cid in range(result.k)
        ]
        _emit(rows, ["cluster_id", "size", "representative"], args.representatives, out)


def cmd_project(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    space = load_text(args.vectors)
    report = read_csv(args.cluster_report, dtypes={"token": str, "cluster_id": int})
    cluster_of = dict(zip(report["token"].tolist(), report["cluster_id"].tolist()))
    selected = set(select_clusters(cluster_of, args.cluster_id, args.cluster_of))
    tokens = [t for t in space.tokens if cluster_of.get(t) in selected]
    vectors = np.vstack([space.vector(t) for t in tokens]) if tokens else np.empty((0, space.dim))
    tc = config.tsne_config()
    projection = tsne(vectors, tokens=tokens, progress=args.progress, **tc.model_dump())
    _emit(projection_rows(projection, cluster_of), PROJECTION_COLUMNS, args.output, out)


def cmd_extract(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    vocab, table = _load_vocab_and_table(args.vocab, args.table)
    space = load_text(args.vectors)
    if space.tokens != vocab.tokens:
        raise ConfigurationError(f"{args.vectors} and {args.vocab} describe different vocabularies")
    if config.raw_counts and table.weighting != Weighting.UNIFORM:
        if args.input is None:
            raise UsageError("--raw-counts on a weighted table needs --input to recount")
        docs = read_documents(args.input).documents
        ids = iter_token_ids(docs, vocab, config.token_rules())
        table = build_table(ids, len(vocab), config.window, Weighting.UNIFORM, shards=config.threads)
    stoplist = load_stoplist(args.stoplist)
    candidates = extract_candidates(args.seeds, vocab, table, space, config.engine_config(), stoplist)
    _emit([{"token": t, "score": s} for t, s in candidates], ["token", "score"], args.output, out)


def _load_drift(path: Path, args: argparse.Namespace, config: PipelineConfig) -> DriftConfig:
    drift = DriftConfig.from_file(path)
    if hasattr(args, "seed"):
        drift = drift.model_copy(update={"seed": config.stage_seed("simulate")})
    return drift


def _make_collector(spec: str, args: argparse.Namespace, config: PipelineConfig) -> CollectorPort:
    kind, _, target = spec.partition(":")
    if kind == "file" and target:
        return FileCollector(target, config.token_rules())
    if kind == "sim" and target:
        return simulate_drift(_load_drift(Path(target), args, config), config.token_rules())
    raise UsageError(f"--collector must be file:<path> or sim:<drift.json>, got {spec!r}")


def cmd_iterate(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    collector = _make_collector(args.collector, args, config)
    stoplist = load_stoplist(args.stoplist)
    engine = KeywordEngine(config.engine_config(), stoplist, progress=args.progress)
    history = engine.iterate(args.seeds, collector, config.rounds)
    history.save_jsonl(args.history)
    rows = [
        {"token": e.token, "score": e.score, "round_introduced": e.round_introduced}
        for e in history.final
    ]
    _emit(rows, ["token", "score", "round_introduced"], None, out)


def _parse_spaces(specs: Sequence[str]) -> Dict[str, Path]:
    spaces: Dict[str, Path] = {}
    for spec in specs:
        domain, sep, path = spec.partition("=")
        if not sep or not domain or not path:
            raise UsageError(f"--space must be domain=path, got {spec!r}")
        if domain in spaces:
            raise UsageError(f"Domain {domain!r} given twice")
        spaces[domain] = Path(path)
    return spaces


def cmd_compare(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    spaces = {d: load_text(p, domain=d) for d, p in _parse_spaces(args.space).items()}
    report = compare_domains(spaces, config.probes, config.compare_k)
    text = report_to_table(report, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info("Wrote %d report row(s) to %s", len(report.rows), args.output)
    else:
        out.write(text)


def cmd_simulate(args: argparse.Namespace, config: PipelineConfig, out: TextIO) -> None:
    drift = _load_drift(args.drift, args, config)
    write_rounds(simulate_drift(drift, config.token_rules()), args.output)


def _exit_code(error: BaseException) -> int:
    if isinstance(error, NumericError):
        return EXIT_NUMERIC
    if isinstance(error, (ConfigurationError, ValidationError)):
        return EXIT_USAGE
    return EXIT_DATA


def run(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    """Parse ``argv``, run the subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        err.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    args.progress = getattr(args, "progress", False)
    logging.basicConfig(
        level=getattr(logging, getattr(args, "log_level", "INFO")),
        format=LOG_FORMAT,
        stream=err,
        force=True,
    )

    try:
        config = resolve_config(args)
        err.write("# resolved configuration\n")
        err.write("".join(f"{line}\n" for line in config.to_lines()))
        args.handler(args, config, out)
    except (KeywordTrackerError, ValidationError, OSError, UnicodeDecodeError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return _exit_code(e)
    return EXIT_OK


def main() -> None:
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
