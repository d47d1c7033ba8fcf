"""Deterministic report bundles: CSV/JSON artifacts that diff cleanly.

File names are fixed: summary.json, groups.json, beneficiaries.csv,
scatter.csv, histogram.csv, timeline.csv, manifest.json. Every file is
written atomically (temp file + rename) and, except for the manifest
timestamp, two runs over identical inputs produce byte-identical bundles.

Author identities are pseudonymized by default; real ids appear only
behind an explicit reveal switch.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

from .ingest import Corpus
from .metrics import (
    BeneficiaryStats,
    GroupSizeHistogram,
    TimelineHistogram,
    scatter_points,
    share_percent,
)
from .motif import EqualReferencesGroup, groups_to_jsonable

TOOL_NAME = "citemotifs"
TOOL_VERSION = "0.1.0"

BENEFICIARY_COLUMNS = [
    "pseudonym",
    "total_citations",
    "motif_citations",
    "motif_share_pct",
    "motif_share_raw",
    "flags",
]


class ReportError(RuntimeError):
    """Refused to write a bundle (e.g. version mismatch without force)."""


@dataclass(frozen=True)
class ReportBundle:
    directory: Path
    file_digests: dict[str, str]


def emit(
    out_dir,
    corpus: Corpus,
    groups: Sequence[EqualReferencesGroup],
    run_config: Mapping[str, object],
    input_digests: Mapping[str, str],
    beneficiaries: Sequence[BeneficiaryStats] | None = None,
    histograms: Sequence[GroupSizeHistogram] = (),
    timeline: TimelineHistogram | None = None,
    force: bool = False,
    reveal: bool = False,
) -> ReportBundle:
    """Write the full bundle for one detection run.

    ``beneficiaries`` and ``timeline`` may be None (corpora without
    authorship or dates); the corresponding files are still emitted with
    headers only so consumers see a stable file set.
    """
    out = Path(out_dir)
    _guard_existing_manifest(out, force)
    out.mkdir(parents=True, exist_ok=True)

    files = {
        "summary.json": _json_text(
            build_summary(corpus, groups, run_config, beneficiaries, timeline)
        ),
        "groups.json": _json_text(groups_to_jsonable(groups)),
        "beneficiaries.csv": _beneficiaries_csv(beneficiaries or (), corpus, reveal),
        "scatter.csv": _scatter_csv(beneficiaries or ()),
        "histogram.csv": _histogram_csv(histograms),
        "timeline.csv": _timeline_csv(timeline),
    }
    digests = _write_all(out, files)
    digests["manifest.json"] = _write_manifest(out, run_config, input_digests, digests)
    return ReportBundle(directory=out, file_digests=digests)


def emit_comparison(
    out_dir,
    hist_a: GroupSizeHistogram,
    hist_b: GroupSizeHistogram,
    run_config: Mapping[str, object],
    input_digests: Mapping[str, str],
    force: bool = False,
) -> ReportBundle:
    """Paired normalized histograms plus a per-bucket ratio table."""
    out = Path(out_dir)
    _guard_existing_manifest(out, force)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "histogram_a.csv": _histogram_csv([hist_a]),
        "histogram_b.csv": _histogram_csv([hist_b]),
        "comparison.csv": _comparison_csv(hist_a, hist_b),
        "summary.json": _json_text(
            {
                "datasets": {
                    "a": {"label": hist_a.dataset_label, "papers": hist_a.paper_count},
                    "b": {"label": hist_b.dataset_label, "papers": hist_b.paper_count},
                },
                "config": dict(run_config),
            }
        ),
    }
    digests = _write_all(out, files)
    digests["manifest.json"] = _write_manifest(out, run_config, input_digests, digests)
    return ReportBundle(directory=out, file_digests=digests)


def emit_timeline(
    out_dir,
    corpus: Corpus,
    timeline: TimelineHistogram,
    run_config: Mapping[str, object],
    input_digests: Mapping[str, str],
    force: bool = False,
) -> ReportBundle:
    out = Path(out_dir)
    _guard_existing_manifest(out, force)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "timeline.csv": _timeline_csv(timeline),
        "summary.json": _json_text(build_summary(corpus, (), run_config, None, timeline)),
    }
    digests = _write_all(out, files)
    digests["manifest.json"] = _write_manifest(out, run_config, input_digests, digests)
    return ReportBundle(directory=out, file_digests=digests)


def build_summary(
    corpus: Corpus,
    groups: Sequence[EqualReferencesGroup],
    run_config: Mapping[str, object],
    beneficiaries: Sequence[BeneficiaryStats] | None = None,
    timeline: TimelineHistogram | None = None,
) -> dict:
    stub_count = sum(1 for p in corpus.papers.values() if p.is_stub)
    summary: dict = {
        "label": corpus.label,
        "config": dict(run_config),
        "papers": {
            "total": len(corpus.papers),
            "defined": corpus.paper_count,
            "external_stubs": stub_count,
        },
        "authors": {
            "total": len(corpus.authors),
            "with_profile": sum(1 for a in corpus.authors.values() if a.has_profile),
            "name_keyed": corpus.name_keyed_author_count,
        },
        "edges": sum(len(p.references) for p in corpus.papers.values()),
        "ingest": {
            "self_references_dropped": corpus.stats.self_references_dropped,
            "duplicate_edges_collapsed": corpus.stats.duplicate_edges_collapsed,
            "invalid_dates_nulled": corpus.stats.invalid_dates_nulled,
            "declared_nodes": corpus.stats.declared_nodes,
            "declared_edges": corpus.stats.declared_edges,
        },
        "groups": {
            "count": len(groups),
            "largest_citer_count": max((len(g.citers) for g in groups), default=0),
        },
        "notes": [],
    }
    if corpus.name_keyed_author_count:
        summary["notes"].append(
            f"{corpus.name_keyed_author_count} authors are keyed by normalized "
            "display name (no profile link); author-level results may merge or "
            "split such identities"
        )
    if beneficiaries is not None:
        collisions = _pseudonym_collisions(beneficiaries)
        summary["pseudonym_collisions"] = collisions
        if collisions:
            summary["notes"].append(
                "pseudonym collisions present; colliding pseudonyms listed in "
                "pseudonym_collisions"
            )
    if timeline is not None:
        summary["timeline"] = {
            "quarters": len(timeline.buckets),
            "undated_excluded": timeline.undated_excluded,
            "pre_2000_excluded": timeline.pre_2000_excluded,
        }
    return summary


def read_beneficiary_table(path) -> list[dict]:
    """Re-parse beneficiaries.csv into typed rows (round-trip partner of
    the writer)."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "pseudonym": row["pseudonym"],
                    "total_citations": int(row["total_citations"])
                    if row["total_citations"]
                    else None,
                    "motif_citations": int(row["motif_citations"]),
                    "motif_share_pct": int(row["motif_share_pct"])
                    if row["motif_share_pct"]
                    else None,
                    "motif_share_raw": float(row["motif_share_raw"])
                    if row["motif_share_raw"]
                    else None,
                    "flags": tuple(row["flags"].split(";")) if row["flags"] else (),
                }
            )
    return rows


def load_manifest(path, drop_timestamp: bool = False) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    if drop_timestamp:
        manifest.pop("created_at", None)
    return manifest


def sha256_of_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


# --- renderers --------------------------------------------------------------


def _beneficiaries_csv(
    beneficiaries: Sequence[BeneficiaryStats], corpus: Corpus, reveal: bool
) -> str:
    columns = list(BENEFICIARY_COLUMNS)
    if reveal:
        columns += ["author_id", "display_name"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for s in beneficiaries:
        pct = ""
        raw = ""
        if s.motif_share is not None:
            pct = share_percent(s.motif_citations, s.total_citations)
            raw = repr(s.motif_share)
        row = [
            s.pseudonym,
            "" if s.total_citations is None else s.total_citations,
            s.motif_citations,
            pct,
            raw,
            ";".join(s.flags),
        ]
        if reveal:
            rec = corpus.authors.get(s.author)
            row += [s.author, (rec.display_name if rec else None) or ""]
        writer.writerow(row)
    return buf.getvalue()


def _scatter_csv(beneficiaries: Sequence[BeneficiaryStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["distinct_cited_papers", "groups_as_cited", "pseudonym"])
    for x, y, pseudonym in scatter_points(beneficiaries):
        writer.writerow([x, y, pseudonym])
    return buf.getvalue()


def _histogram_csv(histograms: Sequence[GroupSizeHistogram]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["size_metric", "group_size", "raw_count", "normalized_count"])
    for hist in histograms:
        for size, bucket in sorted(hist.buckets.items()):
            writer.writerow([hist.size_metric, size, bucket.raw, repr(bucket.normalized)])
    return buf.getvalue()


def _comparison_csv(a: GroupSizeHistogram, b: GroupSizeHistogram) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["group_size", "raw_a", "normalized_a", "raw_b", "normalized_b", "ratio_a_over_b"]
    )
    for size in sorted(set(a.buckets) | set(b.buckets)):
        in_a = a.buckets.get(size)
        in_b = b.buckets.get(size)
        ratio = ""
        if in_a and in_b:
            ratio = repr(in_a.normalized / in_b.normalized)
        writer.writerow(
            [
                size,
                in_a.raw if in_a else 0,
                repr(in_a.normalized) if in_a else repr(0.0),
                in_b.raw if in_b else 0,
                repr(in_b.normalized) if in_b else repr(0.0),
                ratio,
            ]
        )
    return buf.getvalue()


def _timeline_csv(timeline: TimelineHistogram | None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["quarter_start", "paper_count", "mean_author_count"])
    if timeline is not None:
        for bucket in timeline.buckets:
            writer.writerow(
                [
                    bucket.quarter_start.isoformat(),
                    bucket.paper_count,
                    "" if bucket.mean_author_count is None else repr(bucket.mean_author_count),
                ]
            )
    return buf.getvalue()


def _pseudonym_collisions(beneficiaries: Sequence[BeneficiaryStats]) -> list[str]:
    by_pseudonym: dict[str, set[str]] = {}
    for s in beneficiaries:
        by_pseudonym.setdefault(s.pseudonym, set()).add(s.author)
    return sorted(p for p, ids in by_pseudonym.items() if len(ids) > 1)


# --- plumbing ---------------------------------------------------------------


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _guard_existing_manifest(out: Path, force: bool) -> None:
    manifest_path = out / "manifest.json"
    if not manifest_path.exists() or force:
        return
    try:
        existing = load_manifest(manifest_path)
    except (OSError, json.JSONDecodeError):
        raise ReportError(
            f"{out} contains an unreadable manifest.json; pass --force to overwrite"
        ) from None
    version = existing.get("version")
    if version != TOOL_VERSION:
        raise ReportError(
            f"{out} holds reports from {existing.get('tool', 'unknown')} "
            f"{version}; current version is {TOOL_VERSION}. Pass --force to overwrite."
        )


def _write_all(out: Path, files: Mapping[str, str]) -> dict[str, str]:
    digests = {}
    for name, text in files.items():
        _atomic_write(out / name, text)
        digests[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return digests


def _write_manifest(
    out: Path,
    run_config: Mapping[str, object],
    input_digests: Mapping[str, str],
    file_digests: Mapping[str, str],
) -> str:
    manifest = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "config": dict(run_config),
        "inputs": dict(input_digests),
        "files": dict(sorted(file_digests.items())),
    }
    text = _json_text(manifest)
    _atomic_write(out / "manifest.json", text)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
