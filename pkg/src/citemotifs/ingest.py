"""Corpus ingestion: edge-list and JSON-Lines citation corpora.

Two on-disk formats are supported:

* SNAP-style edge lists (``#`` comments, ``FromNodeId<ws>ToNodeId`` data
  lines) for plain paper-level citation networks without authorship.
* A JSON Lines metadata format where each line is one ``paper`` or
  ``author`` object, used for scraped corpora with author identities and
  platform citation counts.

Both parsers produce the same in-memory :class:`Corpus`. Paper ids never
appear in their own reference sets (self references are dropped and
counted), reference sets are deduplicated, and every author id mentioned
anywhere resolves to an :class:`AuthorRecord` (stubs are synthesized).
"""

from __future__ import annotations

import hashlib
import io
import json
import re
from dataclasses import dataclass, field, replace
from datetime import date
from typing import BinaryIO, Iterable, Iterator


class ParseError(ValueError):
    """Malformed corpus input. ``line_number`` is 1-based when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True)
class PaperRecord:
    """One paper: identity, ordered authorship, canonical reference set.

    ``is_stub`` marks papers known only because something cited them
    (partial-capture artifact); stubs never carry references.
    """

    id: str
    title: str | None = None
    authors: tuple[str, ...] = ()
    references: frozenset[str] = frozenset()
    upload_date: date | None = None
    publication_date: date | None = None
    venue: str | None = None
    is_stub: bool = False


@dataclass(frozen=True)
class AuthorRecord:
    id: str
    display_name: str | None = None
    has_profile: bool = False
    total_citations: int | None = None


@dataclass
class CorpusStats:
    """Ingest-time counters surfaced in reports."""

    self_references_dropped: int = 0
    duplicate_edges_collapsed: int = 0
    invalid_dates_nulled: int = 0
    declared_nodes: int | None = None
    declared_edges: int | None = None


@dataclass
class Corpus:
    """Validated in-memory corpus. Treat as immutable after construction."""

    papers: dict[str, PaperRecord]
    authors: dict[str, AuthorRecord]
    label: str
    stats: CorpusStats = field(default_factory=CorpusStats, compare=False)

    def defined_papers(self) -> list[PaperRecord]:
        """Papers explicitly present in the input (excludes external stubs)."""
        return [p for p in self.papers.values() if not p.is_stub]

    @property
    def paper_count(self) -> int:
        return sum(1 for p in self.papers.values() if not p.is_stub)

    @property
    def name_keyed_author_count(self) -> int:
        """Authors identified by a normalized-name key rather than a profile
        slug (heuristic: the id contains whitespace). Reported as a
        limitation wherever author-level results are emitted."""
        return sum(1 for a in self.authors.values() if " " in a.id)

    def has_authorship(self) -> bool:
        return any(p.authors for p in self.papers.values())


def normalize_name_key(name: str) -> str:
    """Fallback author key when no profile link exists: lowercase,
    internal whitespace collapsed to single spaces."""
    return " ".join(name.split()).lower()


def anonymize_author(author_id: str) -> str:
    """Deterministic 6-hex-char pseudonym: leading hex of SHA-256 of the
    UTF-8 id. Collisions are possible and surfaced by reports, never
    silently merged."""
    if not author_id:
        raise ValueError("author id must be non-empty")
    return hashlib.sha256(author_id.encode("utf-8")).hexdigest()[:6]


_DECLARED_RE = re.compile(r"#\s*Nodes:\s*(\d+)\s+Edges:\s*(\d+)")


def parse_edge_list(stream: BinaryIO | Iterable[bytes], label: str) -> Corpus:
    """Parse a SNAP-style edge list into a Corpus.

    Every distinct node id becomes a PaperRecord; each data line
    ``from to`` adds ``to`` to ``from``'s reference set. Duplicate edges
    collapse, self-loops are dropped and counted. No authors exist in
    this format, so author-level analyses are unavailable downstream.

    Raises ParseError for malformed data lines (naming the line number)
    and for input containing no data lines at all.
    """
    refs: dict[str, set[str]] = {}
    stats = CorpusStats()
    data_lines = 0

    for lineno, raw in enumerate(_iter_lines(stream), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _DECLARED_RE.search(line)
            if m:
                stats.declared_nodes = int(m.group(1))
                stats.declared_edges = int(m.group(2))
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 tokens, got {len(tokens)}", lineno)
        try:
            src, dst = str(int(tokens[0])), str(int(tokens[1]))
        except ValueError:
            raise ParseError(f"non-integer node id in {tokens!r}", lineno) from None
        data_lines += 1
        refs.setdefault(src, set())
        refs.setdefault(dst, set())
        if src == dst:
            stats.self_references_dropped += 1
            continue
        if dst in refs[src]:
            stats.duplicate_edges_collapsed += 1
        else:
            refs[src].add(dst)

    if data_lines == 0:
        raise ParseError("empty corpus")

    papers = {
        pid: PaperRecord(id=pid, references=frozenset(r)) for pid, r in refs.items()
    }
    return Corpus(papers=papers, authors={}, label=label, stats=stats)


def parse_metadata_corpus(stream: BinaryIO | Iterable[bytes], label: str) -> Corpus:
    """Parse the JSON Lines metadata format into a Corpus.

    Each line is one object with ``"kind": "paper"`` or ``"kind":
    "author"`` (see the format notes in this module's docstring). Unknown
    fields are ignored. Referenced but undefined papers become external
    stubs; authors named in papers but never defined become stub
    AuthorRecords with ``has_profile=False``.

    A PaperId may appear twice only with an identical reference set
    (the corpus is a snapshot, not a log); conflicting duplicates raise
    ParseError.
    """
    papers: dict[str, PaperRecord] = {}
    authors: dict[str, AuthorRecord] = {}
    stats = CorpusStats()

    for lineno, raw in enumerate(_iter_lines(stream), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", lineno)
        kind = obj.get("kind")
        if kind == "paper":
            rec = _paper_from_obj(obj, lineno, stats)
            prior = papers.get(rec.id)
            if prior is not None and not prior.is_stub:
                if prior.references != rec.references:
                    raise ParseError(
                        f"duplicate paper {rec.id!r} with conflicting reference sets",
                        lineno,
                    )
                continue
            papers[rec.id] = rec
        elif kind == "author":
            rec = _author_from_obj(obj, lineno)
            authors[rec.id] = rec
        else:
            raise ParseError(f"unknown kind {kind!r}", lineno)

    if not papers and not authors:
        raise ParseError("empty corpus")

    # External stubs for referenced-but-absent papers; partial corpora are
    # the normal case, not an error.
    for rec in list(papers.values()):
        for ref in rec.references:
            if ref not in papers:
                papers[ref] = PaperRecord(id=ref, is_stub=True)

    # Stub authors for anyone named in a paper but never defined.
    for rec in papers.values():
        for author_id in rec.authors:
            if author_id not in authors:
                authors[author_id] = AuthorRecord(id=author_id, has_profile=False)

    return Corpus(papers=papers, authors=authors, label=label, stats=stats)


def _paper_from_obj(obj: dict, lineno: int, stats: CorpusStats) -> PaperRecord:
    pid = _required_id(obj, lineno)
    raw_refs = obj.get("references", [])
    if not isinstance(raw_refs, list):
        raise ParseError("references must be a list", lineno)
    refs: set[str] = set()
    for ref in raw_refs:
        ref = _clean_id(ref, "reference", lineno)
        if ref == pid:
            stats.self_references_dropped += 1
        else:
            refs.add(ref)
    raw_authors = obj.get("authors", [])
    if not isinstance(raw_authors, list):
        raise ParseError("authors must be a list", lineno)
    seen: list[str] = []
    for a in raw_authors:
        a = _clean_id(a, "author id", lineno)
        if a not in seen:  # keep order, drop repeats
            seen.append(a)
    return PaperRecord(
        id=pid,
        title=obj.get("title"),
        authors=tuple(seen),
        references=frozenset(refs),
        upload_date=_parse_date(obj.get("upload_date"), stats),
        publication_date=_parse_date(obj.get("publication_date"), stats),
        venue=obj.get("venue"),
    )


def _author_from_obj(obj: dict, lineno: int) -> AuthorRecord:
    aid = _required_id(obj, lineno)
    total = obj.get("total_citations")
    if total is not None:
        if not isinstance(total, int) or isinstance(total, bool) or total < 0:
            raise ParseError(
                f"total_citations must be a non-negative integer, got {total!r}", lineno
            )
    return AuthorRecord(
        id=aid,
        display_name=obj.get("display_name"),
        has_profile=bool(obj.get("has_profile", False)),
        total_citations=total,
    )


def _required_id(obj: dict, lineno: int) -> str:
    if "id" not in obj:
        raise ParseError('missing "id"', lineno)
    return _clean_id(obj["id"], "id", lineno)


def _clean_id(value: object, what: str, lineno: int) -> str:
    if not isinstance(value, str):
        raise ParseError(f"{what} must be a string, got {value!r}", lineno)
    value = value.strip()
    if not value:
        raise ParseError(f"{what} must be non-empty", lineno)
    return value


def _parse_date(value: object, stats: CorpusStats) -> date | None:
    if value is None:
        return None
    try:
        return date.fromisoformat(str(value))
    except ValueError:
        stats.invalid_dates_nulled += 1
        return None


def _iter_lines(stream: BinaryIO | Iterable[bytes]) -> Iterator[str]:
    for raw in stream:
        if isinstance(raw, bytes):
            yield raw.decode("utf-8")
        else:
            yield raw


# --- serialization (round-trip partner of parse_metadata_corpus) -----------


def serialize_metadata_corpus(corpus: Corpus) -> Iterator[str]:
    """Yield JSON Lines (no trailing newline per line) encoding the corpus.

    Author lines come first, then defined papers, both sorted by id, so
    identical corpora always serialize byte-identically. External stubs
    are implied by references and not written.
    """
    for aid in sorted(corpus.authors):
        a = corpus.authors[aid]
        obj: dict[str, object] = {"kind": "author", "id": a.id}
        if a.display_name is not None:
            obj["display_name"] = a.display_name
        obj["has_profile"] = a.has_profile
        if a.total_citations is not None:
            obj["total_citations"] = a.total_citations
        yield json.dumps(obj, sort_keys=True, ensure_ascii=False)
    for pid in sorted(corpus.papers):
        p = corpus.papers[pid]
        if p.is_stub:
            continue
        obj = {"kind": "paper", "id": p.id}
        if p.title is not None:
            obj["title"] = p.title
        obj["authors"] = list(p.authors)
        obj["references"] = sorted(p.references)
        if p.upload_date is not None:
            obj["upload_date"] = p.upload_date.isoformat()
        if p.publication_date is not None:
            obj["publication_date"] = p.publication_date.isoformat()
        if p.venue is not None:
            obj["venue"] = p.venue
        yield json.dumps(obj, sort_keys=True, ensure_ascii=False)


def write_metadata_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in serialize_metadata_corpus(corpus):
            fh.write(line)
            fh.write("\n")


def corpus_from_jsonl_text(text: str, label: str) -> Corpus:
    return parse_metadata_corpus(io.BytesIO(text.encode("utf-8")), label)


def merge_corpora(label: str, *parts: Corpus, prefix_ids: bool = True) -> Corpus:
    """Disjoint union of corpora, relabelling ids with ``p<i>/`` prefixes
    so no paper or author collides across parts. Used by comparison
    baselines and scaling tests."""
    papers: dict[str, PaperRecord] = {}
    authors: dict[str, AuthorRecord] = {}
    for i, part in enumerate(parts):
        pre = f"p{i}/" if prefix_ids else ""
        for p in part.papers.values():
            papers[pre + p.id] = replace(
                p,
                id=pre + p.id,
                authors=tuple(pre + a for a in p.authors),
                references=frozenset(pre + r for r in p.references),
            )
        for a in part.authors.values():
            authors[pre + a.id] = replace(a, id=pre + a.id)
    return Corpus(papers=papers, authors=authors, label=label)
