"""Independent brute-force oracles and random-input builders.

Everything here is deliberately naive: pairwise set comparison, exhaustive
subset enumeration, quadruple counting. The oracles never share code with
the implementations they check.
"""

from __future__ import annotations

import random
from datetime import date, timedelta

from citemotifs.ingest import AuthorRecord, Corpus, PaperRecord


def brute_force_exact_groups(
    out_edges: dict[str, frozenset[str]], min_citers: int = 2, min_refs: int = 1
) -> list[tuple[frozenset[str], frozenset[str]]]:
    """O(n^2) pairwise-set-comparison grouping, canonically ordered."""
    papers = sorted(p for p, refs in out_edges.items() if len(refs) >= min_refs)
    used: set[str] = set()
    raw = []
    for i, p in enumerate(papers):
        if p in used:
            continue
        members = [p]
        for q in papers[i + 1 :]:
            if q not in used and out_edges[q] == out_edges[p]:
                members.append(q)
        if len(members) >= min_citers:
            used.update(members)
            raw.append((frozenset(members), out_edges[p]))
    raw.sort(key=lambda t: (-len(t[0]), sorted(t[0])))
    return raw


def brute_force_maximal_cliques(
    adjacency: dict[str, frozenset[str]], min_size: int = 1
) -> list[frozenset[str]]:
    """Exhaustive subset enumeration; feasible up to ~15 vertices."""
    order = sorted(adjacency)
    n = len(order)
    idx = {v: i for i, v in enumerate(order)}
    nbr = [0] * n
    for v, ns in adjacency.items():
        for u in ns:
            nbr[idx[v]] |= 1 << idx[u]

    is_clique = [False] * (1 << n)
    is_clique[0] = True
    clique_masks = []
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        is_clique[mask] = is_clique[rest] and (rest & ~nbr[low]) == 0
        if is_clique[mask]:
            clique_masks.append(mask)

    maximal = []
    for mask in clique_masks:
        extendable = any(
            not (mask >> v) & 1 and (mask & ~nbr[v]) == 0 for v in range(n)
        )
        if not extendable and bin(mask).count("1") >= min_size:
            maximal.append(frozenset(order[i] for i in range(n) if (mask >> i) & 1))
    maximal.sort(key=lambda c: (-len(c), sorted(c)))
    return maximal


def brute_force_author_projection(
    corpus: Corpus,
) -> dict[tuple[str, str], int]:
    """Count all (citing paper, cited paper, citing author, cited author)
    quadruples directly."""
    weights: dict[tuple[str, str], int] = {}
    for p in corpus.papers.values():
        for q_id in p.references:
            q = corpus.papers[q_id]
            for a in p.authors:
                for b in q.authors:
                    weights[(a, b)] = weights.get((a, b), 0) + 1
    return weights


def brute_force_beneficiary_counts(corpus, groups):
    """Recount (group, citer, cited paper, author) tuples one at a time."""
    groups_as_cited: dict[str, int] = {}
    distinct: dict[str, set[str]] = {}
    motif: dict[str, int] = {}
    for g in groups:
        seen_in_group: set[str] = set()
        for citer in g.citers:
            for q_id in g.cited:
                rec = corpus.papers.get(q_id)
                if rec is None:
                    continue
                for a in rec.authors:
                    motif[a] = motif.get(a, 0) + 1
                    distinct.setdefault(a, set()).add(q_id)
                    seen_in_group.add(a)
        for a in seen_in_group:
            groups_as_cited[a] = groups_as_cited.get(a, 0) + 1
    return groups_as_cited, {a: len(s) for a, s in distinct.items()}, motif


def random_corpus(
    rng: random.Random,
    n_papers: int = 60,
    max_refs: int = 12,
    universe: int = 40,
    duplicate_prob: float = 0.35,
    max_authors: int = 3,
    with_dates: bool = False,
) -> Corpus:
    """Random corpus with deliberately repeated reference sets so exact
    groups actually occur."""
    papers: dict[str, PaperRecord] = {}
    targets = [f"t{j:03d}" for j in range(universe)]
    ref_sets: list[frozenset[str]] = []
    author_pool = [f"w{j:02d}" for j in range(max(4, n_papers // 5))]
    for i in range(n_papers):
        pid = f"p{i:03d}"
        if ref_sets and rng.random() < duplicate_prob:
            refs = rng.choice(ref_sets)
        else:
            size = rng.randint(0, max_refs)
            refs = frozenset(rng.sample(targets, min(size, len(targets))))
            ref_sets.append(refs)
        authors = tuple(
            rng.sample(author_pool, rng.randint(0, max_authors))
        )
        pub = None
        if with_dates and rng.random() < 0.8:
            pub = date(1998, 1, 1) + timedelta(days=rng.randrange(26 * 365))
        papers[pid] = PaperRecord(
            id=pid, authors=authors, references=refs, publication_date=pub
        )
    for t in targets:
        if t not in papers:
            papers[t] = PaperRecord(id=t, is_stub=True)
    authors = {a: AuthorRecord(id=a) for a in author_pool}
    return Corpus(papers=papers, authors=authors, label="random")


def random_adjacency(
    rng: random.Random, n: int, edge_prob: float = 0.4
) -> dict[str, frozenset[str]]:
    nodes = [f"v{i:02d}" for i in range(n)]
    adj: dict[str, set[str]] = {v: set() for v in nodes}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                adj[nodes[i]].add(nodes[j])
                adj[nodes[j]].add(nodes[i])
    return {v: frozenset(s) for v, s in adj.items()}
