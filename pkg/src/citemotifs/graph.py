"""Directed paper-level citation graph and its author-level projection."""

from __future__ import annotations

from dataclasses import dataclass

from .ingest import Corpus


@dataclass(frozen=True)
class CitationGraph:
    """Paper-level graph: citer -> cited. ``in_edges`` is the exact
    transpose of ``out_edges``; both cover every node."""

    nodes: frozenset[str]
    out_edges: dict[str, frozenset[str]]
    in_edges: dict[str, frozenset[str]]

    @property
    def edge_count(self) -> int:
        return sum(len(v) for v in self.out_edges.values())


@dataclass(frozen=True)
class AuthorGraph:
    """Author-level projection. Edge weight counts the distinct
    (citing paper, cited paper) pairs connecting the author pair."""

    nodes: frozenset[str]
    weighted_edges: dict[tuple[str, str], int]

    @property
    def total_weight(self) -> int:
        return sum(self.weighted_edges.values())

    def self_citation_edges(self) -> list[tuple[str, str]]:
        """Author self-citation pairs, retained in the projection but
        worth flagging in reports."""
        return sorted(k for k in self.weighted_edges if k[0] == k[1])


def build_paper_graph(corpus: Corpus) -> CitationGraph:
    """One node per PaperRecord (stubs included), one edge per
    (paper, reference) pair. Stub papers participate as cited nodes only,
    since their reference sets are empty by construction."""
    out: dict[str, frozenset[str]] = {}
    incoming: dict[str, set[str]] = {pid: set() for pid in corpus.papers}
    for pid, rec in corpus.papers.items():
        out[pid] = rec.references
        for ref in rec.references:
            incoming[ref].add(pid)
    return CitationGraph(
        nodes=frozenset(corpus.papers),
        out_edges=out,
        in_edges={pid: frozenset(s) for pid, s in incoming.items()},
    )


def build_author_graph(corpus: Corpus, paper_graph: CitationGraph) -> AuthorGraph:
    """Project the paper graph onto authors: for every paper edge P -> Q,
    every author of P gains weight toward every author of Q.

    Raises ValueError on corpora with no authorship at all (edge-list
    corpora), where the projection is meaningless.
    """
    if not corpus.has_authorship():
        raise ValueError("author projection unavailable: corpus has no authorship data")

    weights: dict[tuple[str, str], int] = {}
    nodes: set[str] = set()
    for pid, cited_set in paper_graph.out_edges.items():
        citing_authors = corpus.papers[pid].authors
        if not citing_authors:
            continue
        nodes.update(citing_authors)
        for qid in cited_set:
            cited_authors = corpus.papers[qid].authors
            nodes.update(cited_authors)
            for a in citing_authors:
                for b in cited_authors:
                    key = (a, b)
                    weights[key] = weights.get(key, 0) + 1
    return AuthorGraph(nodes=frozenset(nodes), weighted_edges=weights)
