import random
from datetime import date

import pytest

from citemotifs.graph import build_paper_graph
from citemotifs.ingest import corpus_from_jsonl_text, merge_corpora
from citemotifs.metrics import (
    beneficiary_stats,
    group_size_histogram,
    quarter_start,
    scatter_points,
    share_percent,
    timeline_histogram,
)
from citemotifs.motif import detect_exact_groups

from oracles import brute_force_beneficiary_counts, random_corpus


def corpus_of(lines):
    return corpus_from_jsonl_text("\n".join(lines), "t")


def paper(pid, refs, authors=(), pub=None, upload=None):
    parts = [f'"kind":"paper","id":"{pid}"']
    parts.append('"authors":%s' % str(list(authors)).replace("'", '"'))
    parts.append('"references":%s' % str(sorted(refs)).replace("'", '"'))
    if pub:
        parts.append(f'"publication_date":"{pub}"')
    if upload:
        parts.append(f'"upload_date":"{upload}"')
    return "{%s}" % ",".join(parts)


def author(aid, total=None):
    if total is None:
        return f'{{"kind":"author","id":"{aid}"}}'
    return f'{{"kind":"author","id":"{aid}","total_citations":{total}}}'


# --- beneficiary stats ------------------------------------------------------


def table1_style_corpus():
    """One author with platform total 27 receiving 22 motif citations:
    2 from a two-citer group on Q1, 20 from a twenty-citer group on Q2."""
    lines = [author("a1", 27), paper("Q1", [], ["a1"]), paper("Q2", [], ["a1"])]
    for i in range(2):
        lines.append(paper(f"P{i}", ["Q1"]))
    for i in range(20):
        lines.append(paper(f"R{i:02d}", ["Q2"]))
    return corpus_of(lines)


def test_motif_citations_and_share_match_table_row():
    corpus = table1_style_corpus()
    groups = detect_exact_groups(build_paper_graph(corpus))
    stats = beneficiary_stats(corpus, groups)
    assert len(stats) == 1
    s = stats[0]
    assert s.motif_citations == 22
    assert s.total_citations == 27
    assert s.groups_as_cited == 2
    assert s.distinct_cited_papers == 2
    assert s.motif_share == pytest.approx(22 / 27)
    assert share_percent(s.motif_citations, s.total_citations) == 81


def test_author_never_cited_is_absent():
    corpus = corpus_of(
        [
            author("ghost", 10),
            paper("Q", [], ["star"]),
            paper("P1", ["Q"]),
            paper("P2", ["Q"]),
        ]
    )
    groups = detect_exact_groups(build_paper_graph(corpus))
    stats = beneficiary_stats(corpus, groups)
    assert [s.author for s in stats] == ["star"]


def test_stats_match_brute_force_recount():
    for seed in range(12):
        corpus = random_corpus(random.Random(seed), n_papers=30, max_authors=3)
        if not corpus.has_authorship():
            continue
        groups = detect_exact_groups(build_paper_graph(corpus))
        stats = beneficiary_stats(corpus, groups)
        oracle_groups, oracle_distinct, oracle_motif = brute_force_beneficiary_counts(
            corpus, groups
        )
        assert {s.author: s.groups_as_cited for s in stats} == oracle_groups
        assert {s.author: s.distinct_cited_papers for s in stats} == oracle_distinct
        assert {s.author: s.motif_citations for s in stats} == oracle_motif


def test_motif_citation_conservation():
    for seed in range(8):
        corpus = random_corpus(random.Random(50 + seed), n_papers=40, max_authors=2)
        if not corpus.has_authorship():
            continue
        groups = detect_exact_groups(build_paper_graph(corpus))
        stats = beneficiary_stats(corpus, groups)
        per_group = 0
        for g in groups:
            pairs = sum(
                len(corpus.papers[q].authors)
                for q in g.cited
                if q in corpus.papers
            )
            per_group += len(g.citers) * pairs
        assert sum(s.motif_citations for s in stats) == per_group


def test_share_bounds_and_inconsistent_flag():
    corpus = corpus_of(
        [
            author("small", 3),
            paper("Q", [], ["small"]),
            paper("P1", ["Q"]),
            paper("P2", ["Q"]),
            paper("P3", ["Q"]),
            paper("P4", ["Q"]),
        ]
    )
    groups = detect_exact_groups(build_paper_graph(corpus))
    (s,) = beneficiary_stats(corpus, groups)
    assert s.motif_citations == 4  # above the stale platform total of 3
    assert s.flags == ("inconsistent-totals",)
    assert s.motif_share > 1  # reported raw, never clamped


def test_missing_or_zero_totals_give_no_share():
    corpus = corpus_of(
        [
            author("zero", 0),
            paper("Q1", [], ["zero"]),
            paper("Q2", [], ["nototal"]),
            paper("P1", ["Q1", "Q2"]),
            paper("P2", ["Q1", "Q2"]),
        ]
    )
    groups = detect_exact_groups(build_paper_graph(corpus))
    stats = beneficiary_stats(corpus, groups)
    assert all(s.motif_share is None for s in stats)


def test_sort_order_share_then_total():
    corpus = corpus_of(
        [
            author("high", 10),
            author("low", 100),
            author("unknown"),
            paper("Q1", [], ["high"]),
            paper("Q2", [], ["low"]),
            paper("Q3", [], ["unknown"]),
            paper("P1", ["Q1", "Q2", "Q3"]),
            paper("P2", ["Q1", "Q2", "Q3"]),
        ]
    )
    groups = detect_exact_groups(build_paper_graph(corpus))
    stats = beneficiary_stats(corpus, groups)
    assert [s.author for s in stats] == ["high", "low", "unknown"]


def test_beneficiary_stats_need_authorship():
    corpus = corpus_of([paper("P1", ["Q"]), paper("P2", ["Q"])])
    with pytest.raises(ValueError, match="no authorship"):
        beneficiary_stats(corpus, [])


# --- rounding ---------------------------------------------------------------


@pytest.mark.parametrize(
    "motif,total,expected",
    [(22, 27, 81), (52, 90, 58), (24, 42, 57), (224, 436, 51), (49, 110, 45)],
)
def test_share_percent_published_rows(motif, total, expected):
    assert share_percent(motif, total) == expected


def test_share_percent_rounds_half_up_exactly():
    assert share_percent(1, 8) == 13  # 12.5
    assert share_percent(45, 200) == 23  # 22.5, banker's would say 22
    assert share_percent(1, 2) == 50
    assert share_percent(0, 5) == 0
    assert share_percent(5, 5) == 100


# --- group size histogram ---------------------------------------------------


def groups_with_citer_counts(counts):
    lines = []
    gi = 0
    for c in counts:
        ref = f"ref{gi}"
        for j in range(c):
            lines.append(paper(f"g{gi}p{j}", [ref]))
        gi += 1
    return corpus_of(lines)


def test_histogram_arithmetic():
    corpus = groups_with_citer_counts([2, 2, 5])
    # pad to exactly 100 defined papers
    extra = [paper(f"pad{i}", []) for i in range(100 - corpus.paper_count)]
    corpus = corpus_of(
        [paper(p.id, sorted(p.references)) for p in corpus.defined_papers()] + extra
    )
    groups = detect_exact_groups(build_paper_graph(corpus))
    hist = group_size_histogram(groups, corpus)
    assert hist.paper_count == 100
    assert {s: (b.raw, b.normalized) for s, b in hist.buckets.items()} == {
        2: (2, 0.02),
        5: (1, 0.01),
    }


def test_histogram_empty_groups():
    corpus = corpus_of([paper("p", [])])
    hist = group_size_histogram([], corpus)
    assert hist.buckets == {}


def test_histogram_total_nodes_metric():
    corpus = groups_with_citer_counts([2])
    groups = detect_exact_groups(build_paper_graph(corpus))
    by_citers = group_size_histogram(groups, corpus, "citers")
    by_total = group_size_histogram(groups, corpus, "total_nodes")
    assert list(by_citers.buckets) == [2]
    assert list(by_total.buckets) == [3]  # 2 citers + 1 shared reference
    with pytest.raises(ValueError):
        group_size_histogram(groups, corpus, "nope")


def test_normalized_counts_invariant_under_disjoint_duplication():
    corpus = random_corpus(random.Random(3), n_papers=80)
    doubled = merge_corpora(corpus.label, corpus, corpus)
    hist = group_size_histogram(
        detect_exact_groups(build_paper_graph(corpus)), corpus
    )
    hist2 = group_size_histogram(
        detect_exact_groups(build_paper_graph(doubled)), doubled
    )
    assert hist2.paper_count == 2 * hist.paper_count
    for size, bucket in hist.buckets.items():
        assert hist2.buckets[size].raw == 2 * bucket.raw
        assert hist2.buckets[size].normalized == bucket.normalized


# --- timeline ---------------------------------------------------------------


def test_same_quarter_bucketing():
    corpus = corpus_of(
        [
            paper("p1", [], pub="2022-01-15"),
            paper("p2", [], pub="2022-02-20"),
        ]
    )
    hist = timeline_histogram(corpus)
    assert len(hist.buckets) == 1
    assert hist.buckets[0].quarter_start == date(2022, 1, 1)
    assert hist.buckets[0].paper_count == 2


def test_pre_2000_and_undated_counted_separately():
    corpus = corpus_of(
        [
            paper("old", [], pub="1999-06-01"),
            paper("nodate", []),
            paper("ok", [], pub="2001-05-05"),
        ]
    )
    hist = timeline_histogram(corpus)
    assert hist.pre_2000_excluded == 1
    assert hist.undated_excluded == 1
    assert sum(b.paper_count for b in hist.buckets) == 1


def test_upload_date_fallback_and_mean_authors():
    corpus = corpus_of(
        [
            paper("p1", [], authors=["a", "b"], upload="2020-03-01"),
            paper("p2", [], authors=["a", "b", "c", "d"], pub="2020-02-15"),
            paper("p3", [], upload="2020-01-02"),  # no authors: excluded from mean
        ]
    )
    hist = timeline_histogram(corpus)
    (bucket,) = hist.buckets
    assert bucket.paper_count == 3
    assert bucket.mean_author_count == 3.0


def test_quarters_are_contiguous_with_gaps_zeroed():
    corpus = corpus_of(
        [
            paper("p1", [], pub="2020-01-01"),
            paper("p2", [], pub="2020-12-31"),
        ]
    )
    hist = timeline_histogram(corpus)
    starts = [b.quarter_start for b in hist.buckets]
    assert starts == [
        date(2020, 1, 1),
        date(2020, 4, 1),
        date(2020, 7, 1),
        date(2020, 10, 1),
    ]
    assert [b.paper_count for b in hist.buckets] == [1, 0, 0, 1]


def test_timeline_matches_generator_ledger():
    rng = random.Random(21)
    ledger: dict[date, int] = {}
    lines = []
    for i in range(120):
        year = rng.randint(2000, 2024)
        month = rng.randint(1, 12)
        day = rng.randint(1, 28)
        d = date(year, month, day)
        ledger[quarter_start(d)] = ledger.get(quarter_start(d), 0) + 1
        lines.append(paper(f"p{i:03d}", [], pub=d.isoformat()))
    corpus = corpus_of(lines)
    hist = timeline_histogram(corpus)
    assert {b.quarter_start: b.paper_count for b in hist.buckets if b.paper_count} == ledger
    assert hist.undated_excluded == 0


def test_timeline_honors_filter():
    corpus = corpus_of(
        [
            paper("keep", [], pub="2020-01-01"),
            paper("drop", [], pub="2020-01-01"),
        ]
    )
    hist = timeline_histogram(corpus, paper_filter=lambda r: r.id == "keep")
    assert hist.buckets[0].paper_count == 1


# --- scatter ----------------------------------------------------------------


def test_scatter_single_author():
    corpus = corpus_of(
        [paper("Q", [], ["a1"]), paper("P1", ["Q"]), paper("P2", ["Q"])]
    )
    groups = detect_exact_groups(build_paper_graph(corpus))
    stats = beneficiary_stats(corpus, groups)
    pts = scatter_points(stats)
    assert len(pts) == 1
    assert pts[0][:2] == (1, 1)


def test_scatter_counts_papers_and_groups():
    lines = [paper(f"Q{i}", [], ["star"]) for i in range(3)]
    # 5 groups, each citing a different subset of star's papers
    subsets = [["Q0"], ["Q1"], ["Q2"], ["Q0", "Q1"], ["Q1", "Q2"]]
    for gi, subset in enumerate(subsets):
        for j in range(2):
            lines.append(paper(f"g{gi}p{j}", subset))
    corpus = corpus_of(lines)
    groups = detect_exact_groups(build_paper_graph(corpus))
    stats = beneficiary_stats(corpus, groups)
    pts = scatter_points(stats)
    assert pts[0][:2] == (3, 5)


def test_scatter_point_count_matches_cited_authors():
    for seed in range(6):
        corpus = random_corpus(random.Random(300 + seed), n_papers=40, max_authors=2)
        if not corpus.has_authorship():
            continue
        groups = detect_exact_groups(build_paper_graph(corpus))
        stats = beneficiary_stats(corpus, groups)
        assert len(scatter_points(stats)) == sum(
            1 for s in stats if s.groups_as_cited >= 1
        )
