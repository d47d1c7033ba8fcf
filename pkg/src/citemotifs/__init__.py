"""Citation-network forensics: equal-references group detection and
beneficiary analysis."""

from .graph import AuthorGraph, CitationGraph, build_author_graph, build_paper_graph
from .ingest import (
    AuthorRecord,
    Corpus,
    CorpusStats,
    PaperRecord,
    ParseError,
    anonymize_author,
    merge_corpora,
    normalize_name_key,
    parse_edge_list,
    parse_metadata_corpus,
    serialize_metadata_corpus,
    write_metadata_corpus,
)
from .metrics import (
    BeneficiaryStats,
    GroupSizeHistogram,
    TimelineHistogram,
    beneficiary_stats,
    group_size_histogram,
    scatter_points,
    share_percent,
    timeline_histogram,
)
from .motif import (
    CliqueCapError,
    EqualReferencesGroup,
    InvariantError,
    SimilarityGraph,
    annotate_authors,
    build_similarity_graph,
    detect_exact_groups,
    detect_near_duplicate_groups,
    filter_strict_distinct_authors,
    fingerprint,
    maximal_cliques,
    sweep_exact_group_counts,
    verify_exact_groups,
)
from .report import TOOL_VERSION as __version__
from .report import ReportBundle, emit, emit_comparison, read_beneficiary_table
from .synth import (
    FarmConfig,
    GroundTruth,
    InjectedGroup,
    ablation_sweep,
    generate,
    generate_rg_mimic,
    perturb_citers,
    score_detection,
)

__all__ = [
    "AuthorGraph",
    "AuthorRecord",
    "BeneficiaryStats",
    "CitationGraph",
    "CliqueCapError",
    "Corpus",
    "CorpusStats",
    "EqualReferencesGroup",
    "FarmConfig",
    "GroundTruth",
    "GroupSizeHistogram",
    "InjectedGroup",
    "InvariantError",
    "PaperRecord",
    "ParseError",
    "ReportBundle",
    "SimilarityGraph",
    "TimelineHistogram",
    "ablation_sweep",
    "annotate_authors",
    "anonymize_author",
    "beneficiary_stats",
    "build_author_graph",
    "build_paper_graph",
    "build_similarity_graph",
    "detect_exact_groups",
    "detect_near_duplicate_groups",
    "emit",
    "emit_comparison",
    "filter_strict_distinct_authors",
    "fingerprint",
    "generate",
    "generate_rg_mimic",
    "group_size_histogram",
    "maximal_cliques",
    "merge_corpora",
    "normalize_name_key",
    "parse_edge_list",
    "parse_metadata_corpus",
    "perturb_citers",
    "read_beneficiary_table",
    "scatter_points",
    "score_detection",
    "serialize_metadata_corpus",
    "share_percent",
    "sweep_exact_group_counts",
    "timeline_histogram",
    "verify_exact_groups",
    "write_metadata_corpus",
    "__version__",
]
