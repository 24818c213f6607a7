"""Streaming TSV readers for the three corpus files.

File layouts (UTF-8, ``\\t`` separated, no header)::

    papers.tsv        paper_id  year(optional)  venue_id(optional)
    references.tsv    citing_paper_id  cited_paper_id
    affiliations.tsv  paper_id  author_id  institution_id(optional)

Malformed rows are rejected and counted; parsing carries on. The one hard
error is a paper id listed twice in the papers file.
"""

from __future__ import annotations

import logging
import os
from array import array
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import (
    ABSENT,
    YEAR_ABSENT,
    AffiliationTable,
    CitationGraph,
    Corpus,
    EntityKind,
    Interner,
    PaperMeta,
    build_indices,
)

log = logging.getLogger(__name__)

MIN_YEAR = 1000
MAX_YEAR = 3000
MAX_REJECT_SAMPLES = 20


class IngestError(Exception):
    """Input that cannot be ingested at all (as opposed to a bad row)."""


class DuplicatePaperError(IngestError):
    pass


@dataclass
class FileReport:
    """Counters for one input file."""

    name: str
    rows_read: int = 0
    rows_rejected: int = 0
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    reject_samples: list[tuple[int, str]] = field(default_factory=list)

    @property
    def rows_accepted(self) -> int:
        return self.rows_read - self.rows_rejected

    def reject(self, lineno: int, reason: str) -> None:
        self.rows_rejected += 1
        if len(self.reject_samples) < MAX_REJECT_SAMPLES:
            self.reject_samples.append((lineno, reason))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "rows_read": self.rows_read,
            "rows_rejected": self.rows_rejected,
            "self_loops_dropped": self.self_loops_dropped,
            "duplicates_dropped": self.duplicates_dropped,
            "reject_samples": [list(s) for s in self.reject_samples],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FileReport":
        return cls(
            name=d["name"],
            rows_read=d["rows_read"],
            rows_rejected=d["rows_rejected"],
            self_loops_dropped=d["self_loops_dropped"],
            duplicates_dropped=d["duplicates_dropped"],
            reject_samples=[tuple(s) for s in d["reject_samples"]],
        )


@dataclass
class IngestReport:
    papers: FileReport = field(default_factory=lambda: FileReport("papers"))
    references: FileReport = field(default_factory=lambda: FileReport("references"))
    affiliations: FileReport = field(default_factory=lambda: FileReport("affiliations"))
    papers_without_authors: int = 0

    @property
    def files(self) -> tuple[FileReport, FileReport, FileReport]:
        return (self.papers, self.references, self.affiliations)

    def format(self) -> str:
        lines = []
        for f in self.files:
            lines.append(
                f"{f.name}: rows_read={f.rows_read} accepted={f.rows_accepted} "
                f"rejected={f.rows_rejected} self_loops_dropped={f.self_loops_dropped} "
                f"duplicates_dropped={f.duplicates_dropped}"
            )
            for lineno, reason in f.reject_samples:
                lines.append(f"  line {lineno}: {reason}")
        lines.append(f"papers_without_authors: {self.papers_without_authors}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "files": [f.to_dict() for f in self.files],
            "papers_without_authors": self.papers_without_authors,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IngestReport":
        papers, refs, affils = (FileReport.from_dict(f) for f in d["files"])
        return cls(papers, refs, affils, d["papers_without_authors"])


def _rows(lines: Iterable[str]):
    """Yield (lineno, fields) for non-blank lines."""
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        yield lineno, line.split("\t")


def ingest_papers(
    lines: Iterable[str], report: FileReport | None = None
) -> tuple[PaperMeta, Interner, Interner]:
    """Parse the papers file.

    Returns the metadata table plus the paper and venue interners.
    """
    report = report if report is not None else FileReport("papers")
    papers = Interner(EntityKind.PAPER)
    venues = Interner(EntityKind.VENUE)
    years = array("q")
    venue_col = array("q")
    for lineno, cols in _rows(lines):
        report.rows_read += 1
        if len(cols) != 3:
            report.reject(lineno, f"wrong column count ({len(cols)}, expected 3)")
            continue
        pid, year_s, venue_s = cols
        if not pid:
            report.reject(lineno, "empty paper id")
            continue
        if year_s:
            try:
                year = int(year_s)
            except ValueError:
                report.reject(lineno, "bad year")
                continue
            if not MIN_YEAR <= year <= MAX_YEAR:
                report.reject(lineno, "year out of range")
                continue
        else:
            year = YEAR_ABSENT
        if pid in papers:
            raise DuplicatePaperError(f"line {lineno}: duplicate paper id {pid!r}")
        papers.intern(pid)
        years.append(year)
        venue_col.append(venues.intern(venue_s) if venue_s else ABSENT)
    meta = PaperMeta(
        year=np.frombuffer(years, dtype=np.int64).copy(),
        venue=np.frombuffer(venue_col, dtype=np.int64).copy(),
    )
    return meta, papers, venues


def ingest_references(
    lines: Iterable[str], papers: Interner, report: FileReport | None = None
) -> CitationGraph:
    """Parse the references file against already-ingested papers."""
    report = report if report is not None else FileReport("references")
    citing = array("q")
    cited = array("q")
    lookup = papers.lookup
    for lineno, cols in _rows(lines):
        report.rows_read += 1
        if len(cols) != 2:
            report.reject(lineno, f"wrong column count ({len(cols)}, expected 2)")
            continue
        src, dst = lookup(cols[0]), lookup(cols[1])
        if src is None or dst is None:
            report.reject(lineno, "unknown paper id")
            continue
        if src == dst:
            report.self_loops_dropped += 1
            continue
        citing.append(src)
        cited.append(dst)
    n = len(papers)
    graph = CitationGraph.from_edges(
        np.frombuffer(citing, dtype=np.int64), np.frombuffer(cited, dtype=np.int64), n
    )
    report.duplicates_dropped = len(citing) - graph.num_edges
    return graph


def ingest_affiliations(
    lines: Iterable[str], papers: Interner, report: FileReport | None = None
) -> tuple[AffiliationTable, Interner, Interner]:
    """Parse the affiliations file; authors and institutions are interned on sight.

    Returns the affiliation table plus the author and institution interners.
    """
    report = report if report is not None else FileReport("affiliations")
    authors = Interner(EntityKind.AUTHOR)
    insts = Interner(EntityKind.INSTITUTION)
    flat = array("q")
    lookup = papers.lookup
    for lineno, cols in _rows(lines):
        report.rows_read += 1
        if len(cols) != 3:
            report.reject(lineno, f"wrong column count ({len(cols)}, expected 3)")
            continue
        pid, aid, iid = cols
        p = lookup(pid)
        if p is None:
            report.reject(lineno, "unknown paper id")
            continue
        if not aid:
            report.reject(lineno, "empty author id")
            continue
        flat.append(p)
        flat.append(authors.intern(aid))
        flat.append(insts.intern(iid) if iid else ABSENT)
    triples = np.frombuffer(flat, dtype=np.int64).reshape(-1, 3)
    table = build_indices(triples, len(papers), len(authors), len(insts))
    report.duplicates_dropped = len(triples) - table.num_triples
    return table, authors, insts


def _open(path: str | os.PathLike):
    return open(path, "r", encoding="utf-8", errors="surrogateescape", newline="\n")


def load_corpus(
    papers_path: str | os.PathLike,
    references_path: str | os.PathLike,
    affiliations_path: str | os.PathLike,
) -> tuple[Corpus, IngestReport]:
    """Read all three files and assemble a :class:`Corpus`."""
    for path in (papers_path, references_path, affiliations_path):
        if not os.path.isfile(path):
            raise FileNotFoundError(f"file not found: {path}")
    report = IngestReport()
    with _open(papers_path) as fh:
        meta, papers, venues = ingest_papers(fh, report.papers)
    with _open(references_path) as fh:
        graph = ingest_references(fh, papers, report.references)
    with _open(affiliations_path) as fh:
        affils, authors, insts = ingest_affiliations(fh, papers, report.affiliations)
    report.papers_without_authors = int(np.count_nonzero(affils.paper_authors.degrees() == 0))
    log.info("ingested %d papers, %d edges, %d triples",
             len(papers), graph.num_edges, affils.num_triples)
    corpus = Corpus(papers, authors, venues, insts, meta, graph, affils)
    return corpus, report
