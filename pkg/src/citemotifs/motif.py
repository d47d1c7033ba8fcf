"""Equal-references group detection.

Two modes share one output type:

* exact mode partitions papers by a fingerprint of their reference set
  (linear time; equality is transitive, so equivalence classes and
  maximal cliques coincide);
* near-duplicate mode builds a Jaccard similarity graph at threshold tau
  and enumerates maximal cliques with pivoting recursion.

At tau=1.0 the two paths must produce identical output after canonical
sorting; that equivalence is what pins the clique implementation to the
cheap exact path, and it is asserted in the test suite.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .graph import CitationGraph
from .ingest import Corpus

EXACT = "exact"
NEAR_DUPLICATE = "near-duplicate"


class InvariantError(RuntimeError):
    """An internal consistency check failed; results must not be trusted."""


class CliqueCapError(RuntimeError):
    """Maximal-clique enumeration exceeded the configured safety cap."""

    def __init__(self, cap: int):
        super().__init__(
            f"maximal clique count exceeded the safety cap of {cap}; "
            "raise max_groups or use a higher tau"
        )
        self.cap = cap


def fingerprint(references: Iterable[str]) -> str:
    """Stable digest of a reference set: SHA-256 over the sorted ids,
    each length-prefixed so distinct sets can never concatenate to the
    same byte string."""
    h = hashlib.sha256()
    for ref in sorted(set(references)):
        data = ref.encode("utf-8")
        h.update(str(len(data)).encode("ascii"))
        h.update(b":")
        h.update(data)
    return h.hexdigest()


@dataclass(frozen=True)
class EqualReferencesGroup:
    """One detected motif: citing papers sharing a reference set.

    ``cited`` is the shared set in exact mode and the union of member
    reference sets in near-duplicate mode; ``cited_common`` always holds
    the intersection. ``citer_cited_overlap`` flags members that also
    appear as cited (possible only under tau < 1).
    """

    group_id: int
    mode: str
    tau: float
    citers: frozenset[str]
    cited: frozenset[str]
    citer_authors: frozenset[str] = frozenset()
    cited_authors: frozenset[str] = frozenset()
    cited_common: frozenset[str] = frozenset()
    citer_cited_overlap: frozenset[str] = frozenset()


@dataclass(frozen=True)
class SimilarityGraph:
    """Undirected graph over papers; edges mean reference-set Jaccard
    similarity >= tau."""

    tau: float
    adjacency: dict[str, frozenset[str]]

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(v) for v in self.adjacency.values()) // 2


def detect_exact_groups(
    graph: CitationGraph, min_citers: int = 2, min_refs: int = 1
) -> list[EqualReferencesGroup]:
    """Partition papers with at least ``min_refs`` references by reference
    fingerprint; every class with ``min_citers`` or more members becomes a
    group. Fingerprint matches are verified by full set comparison, so a
    digest collision can never merge two distinct classes.

    Output is canonically ordered: descending citer count, then ascending
    citer ids.
    """
    _check_detection_params(min_citers, min_refs)
    buckets: dict[str, dict[frozenset[str], list[str]]] = {}
    for pid, refs in graph.out_edges.items():
        if len(refs) < min_refs:
            continue
        buckets.setdefault(fingerprint(refs), {}).setdefault(refs, []).append(pid)

    raw: list[tuple[frozenset[str], frozenset[str]]] = []
    for by_set in buckets.values():
        for refs, members in by_set.items():
            if len(members) >= min_citers:
                raw.append((frozenset(members), refs))
    return _finalize_groups(
        [
            _group(citers, cited, cited, mode=EXACT, tau=1.0)
            for citers, cited in raw
        ]
    )


def build_similarity_graph(
    graph: CitationGraph, tau: float, min_refs: int = 1
) -> SimilarityGraph:
    """Connect papers whose reference sets have Jaccard similarity >= tau.

    Candidate pairs come from an inverted index over references (any pair
    with positive similarity shares a reference), with a size-ratio
    prefilter. Quadratic in the worst case; intended for the corpus sizes
    where near-duplicate analysis makes sense.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    eligible = {
        pid: refs for pid, refs in graph.out_edges.items() if len(refs) >= min_refs
    }
    by_ref: dict[str, list[str]] = {}
    for pid in sorted(eligible):
        for ref in eligible[pid]:
            by_ref.setdefault(ref, []).append(pid)

    shared: dict[tuple[str, str], int] = {}
    for members in by_ref.values():
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                pair = (members[i], members[j])
                shared[pair] = shared.get(pair, 0) + 1

    adjacency: dict[str, set[str]] = {pid: set() for pid in eligible}
    for (u, v), inter in shared.items():
        nu, nv = len(eligible[u]), len(eligible[v])
        if min(nu, nv) / max(nu, nv) < tau:
            continue
        union = nu + nv - inter
        if inter / union >= tau:
            adjacency[u].add(v)
            adjacency[v].add(u)
    return SimilarityGraph(
        tau=tau, adjacency={pid: frozenset(s) for pid, s in adjacency.items()}
    )


def maximal_cliques(
    adjacency: Mapping[str, frozenset[str]] | Mapping[str, set[str]],
    min_size: int = 1,
    cap: int | None = None,
) -> list[frozenset[str]]:
    """Enumerate all maximal cliques via recursion with pivoting.

    Returns cliques of at least ``min_size`` vertices, sorted
    canonically. Raises CliqueCapError when more than ``cap`` qualifying
    cliques are found.
    """
    order = sorted(adjacency)
    index = {v: i for i, v in enumerate(order)}
    neighbors = [
        frozenset(index[u] for u in adjacency[v]) for v in order
    ]
    found: list[frozenset[str]] = []

    def expand(clique: list[int], candidates: set[int], excluded: set[int]) -> None:
        if not candidates and not excluded:
            if len(clique) >= min_size:
                if cap is not None and len(found) >= cap:
                    raise CliqueCapError(cap)
                found.append(frozenset(order[i] for i in clique))
            return
        pivot = max(
            candidates | excluded,
            key=lambda u: (len(candidates & neighbors[u]), -u),
        )
        for v in sorted(candidates - neighbors[pivot]):
            clique.append(v)
            expand(clique, candidates & neighbors[v], excluded & neighbors[v])
            clique.pop()
            candidates.remove(v)
            excluded.add(v)

    expand([], set(range(len(order))), set())
    return sorted(found, key=lambda c: (-len(c), sorted(c)))


def detect_near_duplicate_groups(
    graph: CitationGraph,
    tau: float,
    min_citers: int = 2,
    min_refs: int = 1,
    max_groups: int = 1_000_000,
) -> list[EqualReferencesGroup]:
    """Detect groups of papers with near-identical reference sets: maximal
    cliques of the tau-similarity graph, each reported with the union of
    member reference sets as ``cited`` (the intersection rides along as
    ``cited_common``).

    At tau=1.0 this reduces to exact equality, and the output is labelled
    ``exact`` accordingly; it must match :func:`detect_exact_groups`
    structure-for-structure.
    """
    _check_detection_params(min_citers, min_refs)
    sim = build_similarity_graph(graph, tau, min_refs)
    cliques = maximal_cliques(sim.adjacency, min_size=min_citers, cap=max_groups)
    mode = EXACT if tau == 1.0 else NEAR_DUPLICATE
    groups = []
    for clique in cliques:
        ref_sets = [graph.out_edges[pid] for pid in sorted(clique)]
        cited = frozenset().union(*ref_sets)
        common = frozenset(ref_sets[0]).intersection(*ref_sets[1:])
        groups.append(_group(clique, cited, common, mode=mode, tau=tau))
    return _finalize_groups(groups)


def annotate_authors(
    groups: Sequence[EqualReferencesGroup], corpus: Corpus
) -> list[EqualReferencesGroup]:
    """Fill citer_authors / cited_authors from corpus authorship. A no-op
    on corpora without authors (edge-list corpora)."""
    out = []
    for g in groups:
        citer_authors: set[str] = set()
        cited_authors: set[str] = set()
        for pid in g.citers:
            citer_authors.update(corpus.papers[pid].authors)
        for pid in g.cited:
            rec = corpus.papers.get(pid)
            if rec is not None:
                cited_authors.update(rec.authors)
        out.append(
            replace(
                g,
                citer_authors=frozenset(citer_authors),
                cited_authors=frozenset(cited_authors),
            )
        )
    return out


def filter_strict_distinct_authors(
    groups: Sequence[EqualReferencesGroup], corpus: Corpus
) -> list[EqualReferencesGroup]:
    """Strict author rule: keep only groups whose citers span at least two
    distinct author sets, then renumber. Under the default paper-level
    rule two same-reference papers by one identical author set already
    form a group; this filter drops those."""
    kept = []
    for g in groups:
        author_sets = {frozenset(corpus.papers[pid].authors) for pid in g.citers}
        if len(author_sets) >= 2:
            kept.append(g)
    return _finalize_groups(kept)


def verify_exact_groups(
    graph: CitationGraph, groups: Sequence[EqualReferencesGroup]
) -> None:
    """Soundness check for exact mode: every citer's full out-edge set
    equals the group's cited set, and citer sets are pairwise disjoint.
    Raises InvariantError on violation."""
    seen: set[str] = set()
    for g in groups:
        for citer in g.citers:
            if graph.out_edges[citer] != g.cited:
                raise InvariantError(
                    f"group {g.group_id}: citer {citer} reference set does not "
                    "equal the group's cited set"
                )
            if citer in seen:
                raise InvariantError(
                    f"citer {citer} appears in more than one exact-mode group"
                )
            seen.add(citer)


def sweep_exact_group_counts(
    graph: CitationGraph,
    corpus: Corpus | None = None,
    min_refs_values: Sequence[int] = (1, 2, 3),
    min_citers: int = 2,
) -> dict[tuple[int, str], int]:
    """Group counts per detection configuration, for replication tables.

    Keys are (min_refs, rule); rule is ``paper-level`` always, plus
    ``strict-distinct-authors`` when the corpus carries authorship.
    """
    counts: dict[tuple[int, str], int] = {}
    with_authors = corpus is not None and corpus.has_authorship()
    for min_refs in min_refs_values:
        groups = detect_exact_groups(graph, min_citers=min_citers, min_refs=min_refs)
        counts[(min_refs, "paper-level")] = len(groups)
        if with_authors:
            strict = filter_strict_distinct_authors(groups, corpus)
            counts[(min_refs, "strict-distinct-authors")] = len(strict)
    return counts


def groups_to_jsonable(groups: Sequence[EqualReferencesGroup]) -> list[dict]:
    """Stable JSON shape for group lists; all id lists sorted."""
    return [
        {
            "group_id": g.group_id,
            "mode": g.mode,
            "tau": g.tau,
            "citers": sorted(g.citers),
            "cited": sorted(g.cited),
            "citer_authors": sorted(g.citer_authors),
            "cited_authors": sorted(g.cited_authors),
            "cited_common": sorted(g.cited_common),
            "citer_cited_overlap": sorted(g.citer_cited_overlap),
        }
        for g in groups
    ]


def _group(
    citers: frozenset[str],
    cited: frozenset[str],
    common: frozenset[str],
    mode: str,
    tau: float,
) -> EqualReferencesGroup:
    return EqualReferencesGroup(
        group_id=0,
        mode=mode,
        tau=tau,
        citers=citers,
        cited=cited,
        cited_common=common,
        citer_cited_overlap=citers & cited,
    )


def _finalize_groups(
    groups: Iterable[EqualReferencesGroup],
) -> list[EqualReferencesGroup]:
    """Canonical order (descending citer count, ascending citer ids) and
    sequential 1-based group ids."""
    ordered = sorted(groups, key=lambda g: (-len(g.citers), sorted(g.citers)))
    return [replace(g, group_id=i) for i, g in enumerate(ordered, start=1)]


def _check_detection_params(min_citers: int, min_refs: int) -> None:
    if min_citers < 2:
        raise ValueError(f"min_citers must be >= 2, got {min_citers}")
    if min_refs < 1:
        raise ValueError(f"min_refs must be >= 1, got {min_refs}")
