"""Batch command-line front end.

Subcommands: detect, compare, synth, validate, timeline. Exit codes are
stable: 0 success, 1 parse/config errors, 2 I/O errors, 3 internal
invariant violations. All randomness flows through explicit seeds; apart
from manifest timestamps, identical invocations produce identical output
bundles.
"""

from __future__ import annotations

import argparse
import csv
import gzip
import sys
from pathlib import Path

from .graph import build_paper_graph
from .ingest import Corpus, ParseError, parse_edge_list, parse_metadata_corpus, write_metadata_corpus
from .metrics import beneficiary_stats, group_size_histogram, timeline_histogram
from .motif import (
    CliqueCapError,
    InvariantError,
    annotate_authors,
    detect_exact_groups,
    detect_near_duplicate_groups,
    filter_strict_distinct_authors,
    verify_exact_groups,
)
from .report import ReportError, emit, emit_comparison, emit_timeline, sha256_of_file
from .synth import (
    FarmConfig,
    ablation_sweep,
    generate,
    score_detection,
    write_ground_truth,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_INVARIANT = 3


class _CliError(Exception):
    """Config-level problem reported with exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; our contract reserves 2 for I/O.
    def error(self, message):
        raise _CliError(message)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        return args.func(args)
    except (_CliError, ParseError, ValueError, ReportError, CliqueCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvariantError, AssertionError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citemotifs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="detect equal-references groups and report")
    _add_input_args(detect)
    _add_detection_args(detect)
    detect.add_argument("--out", required=True, help="output directory for the bundle")
    detect.add_argument("--force", action="store_true", help="overwrite older bundles")
    detect.add_argument(
        "--reveal", action="store_true", help="include real author ids in reports"
    )
    detect.set_defaults(func=cmd_detect)

    compare = sub.add_parser("compare", help="compare motif prevalence of two corpora")
    compare.add_argument(
        "--input", action="append", required=True, metavar="PATH",
        help="corpus path; give exactly twice",
    )
    compare.add_argument(
        "--format", action="append", choices=["edge-list", "jsonl"],
        help="format per input (one value applies to both)",
    )
    _add_detection_args(compare)
    compare.add_argument("--out", required=True)
    compare.add_argument("--force", action="store_true")
    compare.set_defaults(func=cmd_compare)

    synth = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    _add_farm_args(synth)
    synth.add_argument("--out", required=True, help="output directory")
    synth.set_defaults(func=cmd_synth)

    validate = sub.add_parser(
        "validate", help="generate, detect, and score precision/recall"
    )
    _add_farm_args(validate)
    validate.add_argument("--tau", type=float, default=0.8)
    validate.add_argument(
        "--sweep", action="store_true",
        help="run the perturbation sweep and write (mode, k, precision, recall) rows",
    )
    validate.add_argument("--out", help="directory for sweep.csv (with --sweep)")
    validate.set_defaults(func=cmd_validate)

    timeline = sub.add_parser("timeline", help="publication timeline of a corpus")
    _add_input_args(timeline)
    timeline.add_argument("--out", required=True)
    timeline.add_argument("--force", action="store_true")
    timeline.set_defaults(func=cmd_timeline)
    return parser


def _add_input_args(cmd) -> None:
    cmd.add_argument("--input", required=True, help="corpus file (.gz accepted)")
    cmd.add_argument(
        "--format", choices=["edge-list", "jsonl"],
        help="input format; inferred from the extension when omitted",
    )


def _add_detection_args(cmd) -> None:
    cmd.add_argument("--mode", choices=["exact", "near-dup"], default="exact")
    cmd.add_argument("--tau", type=float, help="similarity threshold for near-dup mode")
    cmd.add_argument("--min-citers", type=int, default=2)
    cmd.add_argument("--min-refs", type=int, default=1)
    cmd.add_argument(
        "--strict-distinct-authors", action="store_true",
        help="require at least two distinct citer author sets per group",
    )
    cmd.add_argument(
        "--max-groups", type=int, default=1_000_000,
        help="safety cap on enumerated groups in near-dup mode",
    )


def _add_farm_args(cmd) -> None:
    d = FarmConfig()
    cmd.add_argument("--background-papers", type=int, default=d.background_papers)
    cmd.add_argument("--refs-mean", type=float, default=d.background_refs_mean)
    cmd.add_argument("--groups", type=int, default=d.group_count)
    cmd.add_argument("--citers-per-group", type=int, default=d.citers_per_group)
    cmd.add_argument("--shared-refs", type=int, default=d.shared_refs_per_group)
    cmd.add_argument("--beneficiaries", type=int, default=d.beneficiary_count)
    cmd.add_argument("--concentration", type=float, default=d.beneficiary_concentration)
    cmd.add_argument("--camouflage-authors", type=int, default=d.camouflage_authors)
    cmd.add_argument("--seed", type=int, default=d.seed)


def _farm_config(args) -> FarmConfig:
    return FarmConfig(
        background_papers=args.background_papers,
        background_refs_mean=args.refs_mean,
        group_count=args.groups,
        citers_per_group=args.citers_per_group,
        shared_refs_per_group=args.shared_refs,
        beneficiary_count=args.beneficiaries,
        beneficiary_concentration=args.concentration,
        camouflage_authors=args.camouflage_authors,
        seed=args.seed,
    )


def _resolve_format(path: str, fmt: str | None) -> str:
    if fmt:
        return fmt
    name = path[:-3] if path.endswith(".gz") else path
    if name.endswith((".jsonl", ".jl", ".ndjson")):
        return "jsonl"
    if name.endswith(".txt"):
        return "edge-list"
    raise _CliError(f"cannot infer format of {path!r}; pass --format")


def _load_corpus(path: str, fmt: str | None) -> Corpus:
    fmt = _resolve_format(path, fmt)
    label = Path(path).name
    for suffix in (".gz", ".txt", ".jsonl", ".jl", ".ndjson"):
        if label.endswith(suffix):
            label = label[: -len(suffix)]
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rb") as fh:
        if fmt == "jsonl":
            return parse_metadata_corpus(fh, label)
        return parse_edge_list(fh, label)


def _validate_tau(args) -> float | None:
    if args.mode == "near-dup":
        if args.tau is None:
            raise _CliError("--tau is required with --mode near-dup")
        if not 0.0 < args.tau <= 1.0:
            raise _CliError(f"--tau must be in (0, 1], got {args.tau}")
        return args.tau
    if args.tau is not None:
        raise _CliError("--tau only applies to --mode near-dup")
    return None


def _detect(args, corpus: Corpus):
    graph = build_paper_graph(corpus)
    tau = _validate_tau(args)
    if args.mode == "near-dup":
        groups = detect_near_duplicate_groups(
            graph, tau=tau, min_citers=args.min_citers,
            min_refs=args.min_refs, max_groups=args.max_groups,
        )
    else:
        groups = detect_exact_groups(
            graph, min_citers=args.min_citers, min_refs=args.min_refs
        )
        verify_exact_groups(graph, groups)
    if corpus.has_authorship():
        groups = annotate_authors(groups, corpus)
        if args.strict_distinct_authors:
            groups = filter_strict_distinct_authors(groups, corpus)
    elif args.strict_distinct_authors:
        raise _CliError(
            "--strict-distinct-authors needs authorship; this corpus has none "
            "(paper-level rule is the only one available)"
        )
    return graph, groups


def _run_config(args, extra: dict | None = None) -> dict:
    config = {
        "command": args.command,
        "mode": getattr(args, "mode", None),
        "tau": getattr(args, "tau", None),
        "min_citers": getattr(args, "min_citers", None),
        "min_refs": getattr(args, "min_refs", None),
        "strict_distinct_authors": getattr(args, "strict_distinct_authors", None),
    }
    if extra:
        config.update(extra)
    return config


def cmd_detect(args) -> int:
    corpus = _load_corpus(args.input, args.format)
    graph, groups = _detect(args, corpus)
    beneficiaries = (
        beneficiary_stats(corpus, groups) if corpus.has_authorship() else None
    )
    histograms = [
        group_size_histogram(groups, corpus, "citers"),
        group_size_histogram(groups, corpus, "total_nodes"),
    ]
    timeline = timeline_histogram(corpus)
    emit(
        args.out,
        corpus,
        groups,
        _run_config(args, {"input": args.input}),
        {args.input: sha256_of_file(args.input)},
        beneficiaries=beneficiaries,
        histograms=histograms,
        timeline=timeline,
        force=args.force,
        reveal=args.reveal,
    )
    largest = max((len(g.citers) for g in groups), default=0)
    print(
        f"{corpus.label}: {corpus.paper_count} papers, {len(groups)} groups, "
        f"largest group {largest}"
    )
    return EXIT_OK


def cmd_compare(args) -> int:
    if len(args.input) != 2:
        raise _CliError("compare needs exactly two --input paths")
    formats = args.format or []
    if len(formats) == 1:
        formats = [formats[0], formats[0]]
    if formats and len(formats) != 2:
        raise _CliError("give --format once (both inputs) or once per input")
    hists = []
    labels = []
    for i, path in enumerate(args.input):
        corpus = _load_corpus(path, formats[i] if formats else None)
        _, groups = _detect(args, corpus)
        hists.append(group_size_histogram(groups, corpus))
        labels.append(corpus.label)
    emit_comparison(
        args.out,
        hists[0],
        hists[1],
        _run_config(args, {"inputs": list(args.input)}),
        {p: sha256_of_file(p) for p in args.input},
        force=args.force,
    )
    print(f"compared {labels[0]} vs {labels[1]}; bundle in {args.out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    config = _farm_config(args)
    corpus, truth = generate(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_metadata_corpus(corpus, out / "corpus.jsonl")
    write_ground_truth(truth, out / "ground_truth.json")
    print(
        f"wrote {corpus.paper_count} papers, {len(truth.injected_groups)} injected "
        f"groups to {out}"
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    config = _farm_config(args)
    corpus, truth = generate(config)
    graph = build_paper_graph(corpus)
    groups = detect_exact_groups(graph)
    precision, recall = score_detection(truth, groups)
    if not truth.injected_groups and not groups:
        print("0 groups detected, vacuous precision/recall 1.0")
    else:
        print(
            f"exact mode: {len(groups)} groups detected, "
            f"precision {precision:.3f}, recall {recall:.3f}"
        )
    if args.sweep:
        rows = ablation_sweep(tau=args.tau)
        for row in rows:
            print(
                f"k={row['k']} {row['mode']}: precision {row['precision']:.3f}, "
                f"recall {row['recall']:.3f}"
            )
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["mode", "k", "precision", "recall"])
                for row in rows:
                    writer.writerow(
                        [row["mode"], row["k"], repr(row["precision"]), repr(row["recall"])]
                    )
    return EXIT_OK


def cmd_timeline(args) -> int:
    corpus = _load_corpus(args.input, args.format)
    timeline = timeline_histogram(corpus)
    emit_timeline(
        args.out,
        corpus,
        timeline,
        _run_config(args, {"input": args.input}),
        {args.input: sha256_of_file(args.input)},
        force=args.force,
    )
    print(
        f"{corpus.label}: {len(timeline.buckets)} quarters, "
        f"{timeline.undated_excluded} undated, "
        f"{timeline.pre_2000_excluded} pre-2000 excluded"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
