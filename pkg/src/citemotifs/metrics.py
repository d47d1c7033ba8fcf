"""Beneficiary statistics, group-size distributions, publication timelines.

All functions here are pure over immutable inputs. Counting conventions:

* motif citations accrue per (citing paper, cited paper) pair within each
  group, matching how platform citation counts accrue per cited work;
* group-size histograms are normalized by the number of defined
  (non-stub) papers in the corpus;
* timelines bucket by calendar quarter, publications since 2000 only.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Callable, Sequence

from .ingest import Corpus, PaperRecord, anonymize_author
from .motif import EqualReferencesGroup

INCONSISTENT_TOTALS = "inconsistent-totals"


@dataclass(frozen=True)
class BeneficiaryStats:
    """Per cited author: how much of their citation record the detected
    motifs account for. ``motif_share`` is None when the platform total is
    unknown or zero; a motif count above the platform total is flagged
    rather than clamped (platform numbers go stale)."""

    author: str
    pseudonym: str
    distinct_cited_papers: int
    groups_as_cited: int
    motif_citations: int
    total_citations: int | None = None
    motif_share: float | None = None
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class HistogramBucket:
    raw: int
    normalized: float


@dataclass(frozen=True)
class GroupSizeHistogram:
    dataset_label: str
    paper_count: int
    buckets: dict[int, HistogramBucket]
    size_metric: str = "citers"  # or "total_nodes"


@dataclass(frozen=True)
class TimelineBucket:
    quarter_start: date
    paper_count: int
    mean_author_count: float | None


@dataclass(frozen=True)
class TimelineHistogram:
    buckets: tuple[TimelineBucket, ...]
    undated_excluded: int
    pre_2000_excluded: int


def beneficiary_stats(
    corpus: Corpus, groups: Sequence[EqualReferencesGroup]
) -> list[BeneficiaryStats]:
    """Aggregate who gets cited from inside the motifs.

    For each author appearing at least once as cited:

    * ``groups_as_cited``: groups whose cited set contains a paper of theirs;
    * ``distinct_cited_papers``: distinct papers of theirs cited by any group;
    * ``motif_citations``: sum over groups of citer count times the number
      of their papers in that group's cited set.

    Sorted by descending motif share (unknown shares last), then
    descending total citations, then author id.
    """
    if not corpus.has_authorship():
        raise ValueError("beneficiary stats unavailable: corpus has no authorship data")

    groups_as_cited: dict[str, int] = {}
    distinct_papers: dict[str, set[str]] = {}
    motif_citations: dict[str, int] = {}

    for g in groups:
        n_citers = len(g.citers)
        authors_in_group: set[str] = set()
        for qid in g.cited:
            rec = corpus.papers.get(qid)
            if rec is None:
                continue
            for a in rec.authors:
                authors_in_group.add(a)
                distinct_papers.setdefault(a, set()).add(qid)
                motif_citations[a] = motif_citations.get(a, 0) + n_citers
        for a in authors_in_group:
            groups_as_cited[a] = groups_as_cited.get(a, 0) + 1

    out = []
    for author in groups_as_cited:
        total = None
        rec = corpus.authors.get(author)
        if rec is not None:
            total = rec.total_citations
        cites = motif_citations[author]
        share = None
        flags: tuple[str, ...] = ()
        if total is not None and total > 0:
            share = cites / total
            if cites > total:
                flags = (INCONSISTENT_TOTALS,)
        out.append(
            BeneficiaryStats(
                author=author,
                pseudonym=anonymize_author(author),
                distinct_cited_papers=len(distinct_papers[author]),
                groups_as_cited=groups_as_cited[author],
                motif_citations=cites,
                total_citations=total,
                motif_share=share,
                flags=flags,
            )
        )
    out.sort(
        key=lambda s: (
            s.motif_share is None,
            -(s.motif_share or 0.0),
            -(s.total_citations if s.total_citations is not None else -1),
            s.author,
        )
    )
    return out


def share_percent(motif_citations: int, total_citations: int) -> int:
    """Integer share of motif citations, rounded half-up, computed in
    exact integer arithmetic (no float rounding surprises)."""
    if total_citations <= 0:
        raise ValueError("total_citations must be positive")
    return (motif_citations * 200 + total_citations) // (2 * total_citations)


def group_size_histogram(
    groups: Sequence[EqualReferencesGroup],
    corpus: Corpus,
    size_metric: str = "citers",
) -> GroupSizeHistogram:
    """Counts of groups per size, raw and normalized by defined-paper
    count. ``size_metric`` selects citer count (default) or total node
    count (citers plus cited), so either reading of a group's "size" can
    be reproduced."""
    if size_metric == "citers":
        sizes = [len(g.citers) for g in groups]
    elif size_metric == "total_nodes":
        sizes = [len(g.citers | g.cited) for g in groups]
    else:
        raise ValueError(f"unknown size_metric {size_metric!r}")
    paper_count = corpus.paper_count
    buckets: dict[int, int] = {}
    for s in sizes:
        buckets[s] = buckets.get(s, 0) + 1
    return GroupSizeHistogram(
        dataset_label=corpus.label,
        paper_count=paper_count,
        buckets={
            s: HistogramBucket(raw=c, normalized=c / paper_count)
            for s, c in sorted(buckets.items())
        },
        size_metric=size_metric,
    )


def quarter_start(d: date) -> date:
    return date(d.year, ((d.month - 1) // 3) * 3 + 1, 1)


def _next_quarter(q: date) -> date:
    return date(q.year + 1, 1, 1) if q.month == 10 else date(q.year, q.month + 3, 1)


def timeline_histogram(
    corpus: Corpus,
    paper_filter: Callable[[PaperRecord], bool] | None = None,
    since: date = date(2000, 1, 1),
) -> TimelineHistogram:
    """Publication counts per calendar quarter with mean author count.

    Uses publication_date, falling back to upload_date. Papers with no
    date at all and papers dated before ``since`` are excluded and counted
    separately. Quarters between the first and last observed are emitted
    contiguously, including empty ones. The mean author count in a bucket
    covers only papers with non-empty author lists.
    """
    if paper_filter is None:
        paper_filter = lambda rec: not rec.is_stub  # noqa: E731

    counts: dict[date, int] = {}
    author_totals: dict[date, list[int]] = {}
    undated = 0
    pre_cutoff = 0
    for rec in corpus.papers.values():
        if not paper_filter(rec):
            continue
        d = rec.publication_date or rec.upload_date
        if d is None:
            undated += 1
            continue
        if d < since:
            pre_cutoff += 1
            continue
        q = quarter_start(d)
        counts[q] = counts.get(q, 0) + 1
        if rec.authors:
            author_totals.setdefault(q, []).append(len(rec.authors))

    buckets: list[TimelineBucket] = []
    if counts:
        q = min(counts)
        last = max(counts)
        while q <= last:
            sizes = author_totals.get(q, [])
            buckets.append(
                TimelineBucket(
                    quarter_start=q,
                    paper_count=counts.get(q, 0),
                    mean_author_count=sum(sizes) / len(sizes) if sizes else None,
                )
            )
            q = _next_quarter(q)
    return TimelineHistogram(
        buckets=tuple(buckets),
        undated_excluded=undated,
        pre_2000_excluded=pre_cutoff,
    )


def scatter_points(
    stats: Sequence[BeneficiaryStats],
) -> list[tuple[int, int, str]]:
    """(distinct cited papers, groups as cited, pseudonym) per author,
    ordered by descending group appearances then pseudonym."""
    pts = [
        (s.distinct_cited_papers, s.groups_as_cited, s.pseudonym) for s in stats
    ]
    pts.sort(key=lambda p: (-p[1], p[2]))
    return pts
