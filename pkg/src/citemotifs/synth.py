"""Synthetic corpora with ground-truth injected citation-farming motifs.

The background network is a recency-biased preferential-attachment
citation process: papers cite earlier papers, reference-list sizes drawn
around a configured mean. Injected groups replicate the farming motif:
every citer in a group carries exactly the group's shared reference
list, a configured share of which points at beneficiary-authored papers
while the remainder is camouflage drawn from the background.

This generator is a test harness for detector precision/recall, not a
scientific model of citation behaviour. Everything is a pure function of
the config, including its seed, so fixtures are portable across runs and
platforms.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, replace
from datetime import date, timedelta
from typing import Sequence

from .graph import build_paper_graph
from .ingest import AuthorRecord, Corpus, PaperRecord, merge_corpora
from .motif import EqualReferencesGroup, detect_exact_groups, detect_near_duplicate_groups

# Background papers authored by each beneficiary; bounds the pool that
# shared reference lists draw their boosted citations from.
PAPERS_PER_BENEFICIARY = 3
# Smallest background reference list; tiny sets collide by chance and
# would contaminate precision measurements with coincidental groups.
MIN_BACKGROUND_REFS = 2
_RECENCY_WINDOW = 50
_RECENCY_PROB = 0.5


class SynthError(RuntimeError):
    """Generated corpus violated a ground-truth guarantee."""


@dataclass(frozen=True)
class FarmConfig:
    background_papers: int = 1000
    background_refs_mean: float = 8.0
    group_count: int = 10
    citers_per_group: int = 3
    shared_refs_per_group: int = 8
    beneficiary_count: int = 5
    beneficiary_concentration: float = 0.5
    camouflage_authors: int = 2
    seed: int = 20240613

    def __post_init__(self) -> None:
        if self.background_papers <= 0:
            raise ValueError("background_papers must be positive")
        if self.background_refs_mean <= 0:
            raise ValueError("background_refs_mean must be positive")
        if self.group_count < 0:
            raise ValueError("group_count must be non-negative")
        if self.citers_per_group < 2:
            raise ValueError("citers_per_group must be >= 2")
        if self.shared_refs_per_group <= 0:
            raise ValueError("shared_refs_per_group must be positive")
        if self.beneficiary_count <= 0:
            raise ValueError("beneficiary_count must be positive")
        if not 0.0 < self.beneficiary_concentration <= 1.0:
            raise ValueError("beneficiary_concentration must be in (0, 1]")
        if self.camouflage_authors < 0:
            raise ValueError("camouflage_authors must be non-negative")

    @property
    def beneficiary_refs_per_group(self) -> int:
        """Slots per shared list pointing at beneficiary papers: the
        concentration share, at least one, at most the whole list."""
        n = round(self.shared_refs_per_group * self.beneficiary_concentration)
        return min(self.shared_refs_per_group, max(1, n))


@dataclass(frozen=True)
class InjectedGroup:
    citers: frozenset[str]
    cited: frozenset[str]


@dataclass(frozen=True)
class GroundTruth:
    injected_groups: tuple[InjectedGroup, ...]
    beneficiary_ids: frozenset[str]


def generate(config: FarmConfig) -> tuple[Corpus, GroundTruth]:
    """Build a synthetic corpus plus the ground truth of what was injected.

    Raises ValueError when the config demands more beneficiary papers per
    shared list than the beneficiary pool holds, and SynthError if a
    post-generation check finds an injected reference list colliding with
    a background paper's.
    """
    rng = random.Random(config.seed)
    n = config.background_papers
    width = len(str(n))
    paper_ids = [f"b{i:0{width}d}" for i in range(n)]

    author_pool = [f"auth{i:04d}" for i in range(max(10, n // 10))]
    beneficiaries = [f"beneficiary{i:03d}" for i in range(config.beneficiary_count)]

    # Background citation structure: each paper cites earlier papers,
    # mixing recency with degree-proportional attachment. Reference sets
    # are kept pairwise distinct (re-drawn on collision) so the background
    # can never contain coincidental exact-mode groups; the earliest
    # papers draw from pools small enough to collide otherwise.
    refs: dict[str, frozenset[str]] = {}
    used_ref_sets: set[frozenset[str]] = set()
    attachment: list[int] = []
    for i in range(n):
        if i == 0:
            refs[paper_ids[0]] = frozenset()
        else:
            k = min(i, max(MIN_BACKGROUND_REFS, _poisson(rng, config.background_refs_mean)))
            for attempt in range(200):
                targets = _draw_targets(rng, i, k, attachment)
                candidate = frozenset(paper_ids[t] for t in targets)
                if candidate not in used_ref_sets:
                    break
                if attempt % 5 == 4 and k < i:
                    k += 1
            else:
                raise SynthError(
                    f"could not draw a fresh reference set for paper {i}"
                )
            refs[paper_ids[i]] = candidate
            used_ref_sets.add(candidate)
            attachment.extend(sorted(targets))
        attachment.append(i)

    # Authorship: 1-3 pool authors per paper, then beneficiaries take sole
    # authorship of a fixed number of distinct background papers.
    authorship = {
        pid: tuple(rng.sample(author_pool, rng.randint(1, 3))) for pid in paper_ids
    }
    pool_size = PAPERS_PER_BENEFICIARY * config.beneficiary_count
    if pool_size > n:
        raise ValueError(
            f"config demands {pool_size} beneficiary papers but only "
            f"{n} background papers exist"
        )
    beneficiary_papers = rng.sample(paper_ids, pool_size)
    for j, pid in enumerate(beneficiary_papers):
        authorship[pid] = (beneficiaries[j % config.beneficiary_count],)

    n_ben = config.beneficiary_refs_per_group
    if config.group_count > 0 and n_ben > len(beneficiary_papers):
        raise ValueError(
            f"each shared list needs {n_ben} beneficiary papers but the "
            f"pool holds only {len(beneficiary_papers)}"
        )
    camouflage_pool = [p for p in paper_ids if p not in set(beneficiary_papers)]
    n_cam = config.shared_refs_per_group - n_ben
    if config.group_count > 0 and n_cam > len(camouflage_pool):
        raise ValueError(
            f"each shared list needs {n_cam} camouflage papers but only "
            f"{len(camouflage_pool)} non-beneficiary papers exist"
        )

    papers: dict[str, PaperRecord] = {}
    bg_start = date(2000, 1, 1)
    bg_days = (date(2021, 12, 31) - bg_start).days
    for pid in paper_ids:
        papers[pid] = PaperRecord(
            id=pid,
            authors=authorship[pid],
            references=refs[pid],
            publication_date=bg_start + timedelta(days=rng.randrange(bg_days + 1)),
        )

    farm_start = date(2022, 1, 1)
    farm_days = (date(2024, 6, 30) - farm_start).days
    injected: list[InjectedGroup] = []
    for g in range(config.group_count):
        shared = frozenset(
            rng.sample(beneficiary_papers, n_ben) + rng.sample(camouflage_pool, n_cam)
        )
        uploader = f"sspa{g:03d}"
        citer_ids = []
        for c in range(config.citers_per_group):
            cid = f"farm{g:03d}-{c:02d}"
            citer_ids.append(cid)
            coauthors = tuple(rng.sample(author_pool, config.camouflage_authors))
            papers[cid] = PaperRecord(
                id=cid,
                authors=(uploader,) + coauthors,
                references=shared,
                publication_date=farm_start + timedelta(days=rng.randrange(farm_days + 1)),
            )
        injected.append(InjectedGroup(citers=frozenset(citer_ids), cited=shared))

    authors: dict[str, AuthorRecord] = {}
    for a in author_pool:
        authors[a] = AuthorRecord(id=a, has_profile=True)
    for b in beneficiaries:
        authors[b] = AuthorRecord(
            id=b, has_profile=True, total_citations=rng.randrange(20, 500)
        )
    for g in range(config.group_count):
        aid = f"sspa{g:03d}"
        authors[aid] = AuthorRecord(id=aid, has_profile=False)

    corpus = Corpus(
        papers=papers, authors=authors, label=f"synth-seed{config.seed}"
    )
    truth = GroundTruth(
        injected_groups=tuple(injected),
        beneficiary_ids=frozenset(beneficiaries),
    )
    _verify_ground_truth(corpus, truth, set(paper_ids))
    return corpus, truth


def _verify_ground_truth(
    corpus: Corpus, truth: GroundTruth, background_ids: set[str]
) -> None:
    background_sets = {
        corpus.papers[pid].references for pid in background_ids
    }
    shared_lists = [g.cited for g in truth.injected_groups]
    for shared in shared_lists:
        if shared in background_sets:
            raise SynthError(
                "an injected shared reference list collides with a background "
                "paper's reference set; choose another seed"
            )
    if len(set(shared_lists)) != len(shared_lists):
        raise SynthError(
            "two injected groups drew identical shared reference lists; "
            "choose another seed"
        )


def _draw_targets(
    rng: random.Random, i: int, k: int, attachment: list[int]
) -> set[int]:
    targets: set[int] = set()
    attempts = 0
    while len(targets) < k and attempts < 50 * k:
        attempts += 1
        if rng.random() < _RECENCY_PROB:
            targets.add(rng.randrange(max(0, i - _RECENCY_WINDOW), i))
        else:
            cand = attachment[rng.randrange(len(attachment))] if attachment else 0
            if cand < i:
                targets.add(cand)
    return targets


def _poisson(rng: random.Random, lam: float) -> int:
    # Knuth's method; fine for the small means used here.
    limit = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= limit:
            return k
        k += 1


def score_detection(
    truth: GroundTruth, detected: Sequence[EqualReferencesGroup]
) -> tuple[float, float]:
    """Precision and recall of detected groups against the injected ones.

    A detected group matches a truth group when the citer sets are equal.
    Empty denominators score 1.0 by convention.
    """
    truth_sets = {g.citers for g in truth.injected_groups}
    detected_sets = [g.citers for g in detected]
    matched_detected = sum(1 for c in detected_sets if c in truth_sets)
    matched_truth = sum(1 for t in truth_sets if t in set(detected_sets))
    precision = matched_detected / len(detected_sets) if detected_sets else 1.0
    recall = matched_truth / len(truth_sets) if truth_sets else 1.0
    return precision, recall


def perturb_citers(
    corpus: Corpus, truth: GroundTruth, k: int, seed: int
) -> Corpus:
    """Randomized-reference ablation: every injected citer swaps ``k`` of
    its references for random papers it did not already cite. Degrades
    exact matches immediately; near-duplicate detection degrades with k.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    rng = random.Random(seed)
    citer_ids = sorted(c for g in truth.injected_groups for c in g.citers)
    citer_set = set(citer_ids)
    candidates = sorted(
        pid
        for pid, rec in corpus.papers.items()
        if not rec.is_stub and pid not in citer_set
    )
    papers = dict(corpus.papers)
    for cid in citer_ids:
        rec = papers[cid]
        swap = min(k, len(rec.references))
        dropped = rng.sample(sorted(rec.references), swap)
        new_refs = set(rec.references) - set(dropped)
        usable = [p for p in candidates if p not in new_refs and p != cid]
        new_refs.update(rng.sample(usable, swap))
        papers[cid] = replace(rec, references=frozenset(new_refs))
    return Corpus(papers=papers, authors=dict(corpus.authors), label=corpus.label)


# Sweep configuration: lists long enough that tau=0.8 tolerates one or
# two swapped references per citer but not three.
SWEEP_CONFIG = FarmConfig(
    background_papers=1000,
    background_refs_mean=8.0,
    group_count=10,
    citers_per_group=3,
    shared_refs_per_group=40,
    beneficiary_count=10,
    beneficiary_concentration=0.5,
    camouflage_authors=2,
    seed=20240613,
)


def ablation_sweep(
    config: FarmConfig = SWEEP_CONFIG,
    ks: Sequence[int] = (1, 2, 3, 4),
    tau: float = 0.8,
    perturb_seed: int = 7,
) -> list[dict]:
    """Per-k precision/recall rows for exact and near-duplicate modes on a
    perturbed synthetic corpus. Row keys: mode, k, precision, recall."""
    corpus, truth = generate(config)
    rows: list[dict] = []
    for k in ks:
        perturbed = perturb_citers(corpus, truth, k, seed=perturb_seed + k)
        graph = build_paper_graph(perturbed)
        for mode, groups in (
            ("exact", detect_exact_groups(graph)),
            ("near-duplicate", detect_near_duplicate_groups(graph, tau=tau)),
        ):
            precision, recall = score_detection(truth, groups)
            rows.append(
                {"mode": mode, "k": k, "precision": precision, "recall": recall}
            )
    return rows


# Group-size profile roughly matching the scraped dataset's shape: 240
# groups over about 3,000 papers, sizes heavy-tailed from pairs up to
# twenty citers.
RG_MIMIC_PROFILE: tuple[tuple[int, int], ...] = (
    (2, 150),
    (3, 40),
    (4, 20),
    (5, 12),
    (6, 8),
    (8, 5),
    (12, 3),
    (20, 2),
)


def generate_rg_mimic(seed: int = 20240613) -> tuple[Corpus, GroundTruth]:
    """Synthetic stand-in for the scraped farming corpus: one sub-corpus
    per group size in RG_MIMIC_PROFILE, merged disjointly."""
    parts = []
    truths = []
    for i, (size, count) in enumerate(RG_MIMIC_PROFILE):
        cfg = FarmConfig(
            background_papers=285,
            group_count=count,
            citers_per_group=size,
            seed=seed + i,
        )
        corpus, truth = generate(cfg)
        parts.append(corpus)
        truths.append(truth)
    merged = merge_corpora("rg-mimic", *parts)
    injected = tuple(
        InjectedGroup(
            citers=frozenset(f"p{i}/{c}" for c in g.citers),
            cited=frozenset(f"p{i}/{q}" for q in g.cited),
        )
        for i, truth in enumerate(truths)
        for g in truth.injected_groups
    )
    beneficiaries = frozenset(
        f"p{i}/{b}" for i, truth in enumerate(truths) for b in truth.beneficiary_ids
    )
    return merged, GroundTruth(injected_groups=injected, beneficiary_ids=beneficiaries)


def ground_truth_to_jsonable(truth: GroundTruth) -> dict:
    return {
        "injected_groups": [
            {"citers": sorted(g.citers), "cited": sorted(g.cited)}
            for g in truth.injected_groups
        ],
        "beneficiaries": sorted(truth.beneficiary_ids),
    }


def write_ground_truth(truth: GroundTruth, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(ground_truth_to_jsonable(truth), fh, indent=2, sort_keys=True)
        fh.write("\n")
