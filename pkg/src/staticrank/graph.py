"""In-memory data model: interned ids, CSR citation graph, paper metadata and
author/institution affiliation indices.

Everything here is immutable after construction. Entity ids are dense
integers handed out in first-seen order by an :class:`Interner`; all
adjacency lists are sorted ascending so that structures built from permuted
input are identical.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

__all__ = [
    "ABSENT",
    "YEAR_ABSENT",
    "COMPONENTS",
    "EntityKind",
    "EntityId",
    "Interner",
    "CSR",
    "CitationGraph",
    "PaperMeta",
    "AffiliationTable",
    "ScoreVector",
    "Corpus",
    "citation_count",
    "build_indices",
]

#: Sentinel for a missing venue / institution index.
ABSENT = -1
#: Sentinel for a missing publication year (valid years are >= 1000).
YEAR_ABSENT = 0

INDEX_DTYPE = np.int64

#: Component score names, in the column order used throughout the package.
COMPONENTS = ("s_pub", "s_age", "s_pr", "s_auth", "s_venue", "s_inst")


class EntityKind(enum.Enum):
    PAPER = "paper"
    AUTHOR = "author"
    VENUE = "venue"
    INSTITUTION = "institution"


class EntityId(NamedTuple):
    kind: EntityKind
    index: int


class Interner:
    """Bijective raw-string <-> dense index mapping for one entity kind."""

    def __init__(self, kind: EntityKind, raw_ids: Iterable[str] = ()):
        self.kind = kind
        self._index: dict[str, int] = {}
        self._raw: list[str] = []
        for raw in raw_ids:
            self.intern(raw)

    def intern(self, raw: str) -> int:
        idx = self._index.get(raw)
        if idx is None:
            idx = len(self._raw)
            self._index[raw] = idx
            self._raw.append(raw)
        return idx

    def lookup(self, raw: str) -> int | None:
        """Index of ``raw`` or ``None`` if it was never interned."""
        return self._index.get(raw)

    def __contains__(self, raw: str) -> bool:
        return raw in self._index

    def resolve(self, index: int) -> str:
        if not 0 <= index < len(self._raw):
            raise IndexError(f"{self.kind.value} index {index} out of range")
        return self._raw[index]

    def entity(self, raw: str) -> EntityId:
        idx = self._index.get(raw)
        if idx is None:
            raise KeyError(f"unknown {self.kind.value} id {raw!r}")
        return EntityId(self.kind, idx)

    @property
    def raw_ids(self) -> Sequence[str]:
        return self._raw

    def __len__(self) -> int:
        return len(self._raw)

    def __iter__(self) -> Iterator[str]:
        return iter(self._raw)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interner):
            return NotImplemented
        return self.kind == other.kind and self._raw == other._raw


@dataclass(frozen=True, eq=False)
class CSR:
    """Compressed sparse rows: row ``i`` owns ``indices[indptr[i]:indptr[i+1]]``."""

    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_pairs(cls, rows: np.ndarray, cols: np.ndarray, n_rows: int) -> "CSR":
        """Build from (row, col) pairs. Pairs must already be unique."""
        rows = np.asarray(rows, dtype=INDEX_DTYPE)
        cols = np.asarray(cols, dtype=INDEX_DTYPE)
        order = np.lexsort((cols, rows))
        counts = np.bincount(rows, minlength=n_rows)
        indptr = np.zeros(n_rows + 1, dtype=INDEX_DTYPE)
        np.cumsum(counts, out=indptr[1:])
        return cls(indptr, cols[order])

    @property
    def n_rows(self) -> int:
        return len(self.indptr) - 1

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def row_ids(self) -> np.ndarray:
        """Row index of every stored entry (the expanded ``indptr``)."""
        return np.repeat(np.arange(self.n_rows, dtype=INDEX_DTYPE), self.degrees())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CSR):
            return NotImplemented
        return np.array_equal(self.indptr, other.indptr) and np.array_equal(
            self.indices, other.indices
        )


@dataclass(frozen=True, eq=False)
class CitationGraph:
    """Citation edges between papers, citing -> cited.

    ``forward`` lists what each paper cites, ``reverse`` who cites it.
    """

    forward: CSR
    reverse: CSR

    @classmethod
    def from_edges(cls, citing, cited, num_papers: int) -> "CitationGraph":
        """Build from edge arrays; drops self-loops and duplicate edges."""
        citing = np.asarray(citing, dtype=INDEX_DTYPE)
        cited = np.asarray(cited, dtype=INDEX_DTYPE)
        if citing.shape != cited.shape:
            raise ValueError("citing and cited arrays differ in length")
        if citing.size and (
            min(citing.min(), cited.min()) < 0
            or max(citing.max(), cited.max()) >= num_papers
        ):
            raise IndexError("edge endpoint outside paper range")
        keep = citing != cited
        citing, cited = citing[keep], cited[keep]
        if citing.size:
            keys = np.unique(citing * num_papers + cited)
            citing, cited = keys // num_papers, keys % num_papers
        return cls(
            CSR.from_pairs(citing, cited, num_papers),
            CSR.from_pairs(cited, citing, num_papers),
        )

    @property
    def num_papers(self) -> int:
        return self.forward.n_rows

    @property
    def num_edges(self) -> int:
        return self.forward.nnz

    def citation_counts(self) -> np.ndarray:
        """c(p) for every paper."""
        return self.reverse.degrees()

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """All (citing, cited) pairs in ascending order."""
        return self.forward.row_ids(), self.forward.indices

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CitationGraph):
            return NotImplemented
        return self.forward == other.forward and self.reverse == other.reverse


@dataclass(frozen=True, eq=False)
class PaperMeta:
    """Per-paper publication year and venue.

    ``year`` holds :data:`YEAR_ABSENT` and ``venue`` holds :data:`ABSENT` for
    missing values.
    """

    year: np.ndarray
    venue: np.ndarray

    def __post_init__(self):
        if self.year.shape != self.venue.shape:
            raise ValueError("year and venue arrays differ in length")

    @property
    def num_papers(self) -> int:
        return len(self.year)

    @property
    def has_year(self) -> np.ndarray:
        return self.year != YEAR_ABSENT

    def max_year(self) -> int | None:
        present = self.year[self.has_year]
        return int(present.max()) if present.size else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PaperMeta):
            return NotImplemented
        return np.array_equal(self.year, other.year) and np.array_equal(
            self.venue, other.venue
        )


@dataclass(frozen=True, eq=False)
class AffiliationTable:
    """Deduplicated (paper, author, institution) triples plus derived indices.

    ``paper_authors`` is A_p, ``author_papers`` is P_a, ``paper_institutions``
    is I_p and ``institution_papers`` is P_i. Institution is :data:`ABSENT`
    in a triple when the row named none.
    """

    papers: np.ndarray
    authors: np.ndarray
    institutions: np.ndarray
    paper_authors: CSR
    author_papers: CSR
    paper_institutions: CSR
    institution_papers: CSR

    @property
    def num_triples(self) -> int:
        return len(self.papers)

    def triples(self) -> Iterator[tuple[int, int, int]]:
        return zip(self.papers.tolist(), self.authors.tolist(), self.institutions.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffiliationTable):
            return NotImplemented
        return (
            np.array_equal(self.papers, other.papers)
            and np.array_equal(self.authors, other.authors)
            and np.array_equal(self.institutions, other.institutions)
            and self.paper_authors == other.paper_authors
            and self.author_papers == other.author_papers
            and self.paper_institutions == other.paper_institutions
            and self.institution_papers == other.institution_papers
        )


def _unique_pairs(a: np.ndarray, b: np.ndarray, n_b: int) -> tuple[np.ndarray, np.ndarray]:
    if a.size == 0:
        return a, b
    keys = np.unique(a * n_b + b)
    return keys // n_b, keys % n_b


def build_indices(
    triples: Iterable[tuple[int, int, int]] | np.ndarray,
    num_papers: int,
    num_authors: int | None = None,
    num_institutions: int | None = None,
) -> AffiliationTable:
    """Deduplicate affiliation triples and derive A_p, P_a, I_p and P_i.

    Institution may be :data:`ABSENT`. Author/institution counts default to
    one past the largest index seen.
    """
    arr = np.asarray(list(triples) if not isinstance(triples, np.ndarray) else triples,
                     dtype=INDEX_DTYPE).reshape(-1, 3)
    if arr.size and (arr[:, 0].min() < 0 or arr[:, 0].max() >= num_papers):
        raise IndexError("affiliation references a paper outside the paper range")
    if arr.size and arr[:, 1].min() < 0:
        raise IndexError("negative author index")
    if num_authors is None:
        num_authors = int(arr[:, 1].max()) + 1 if arr.size else 0
    if num_institutions is None:
        num_institutions = int(arr[:, 2].max()) + 1 if arr.size else 0
    if arr.size and (arr[:, 1].max() >= num_authors or arr[:, 2].max() >= num_institutions):
        raise IndexError("affiliation index outside entity range")

    if arr.size:
        # ABSENT institution sorts first via the +1 shift
        arr = np.unique(arr + np.array([0, 0, 1]), axis=0) - np.array([0, 0, 1])
    papers, authors, insts = arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()

    pa_p, pa_a = _unique_pairs(papers, authors, max(num_authors, 1))
    has_inst = insts != ABSENT
    pi_p, pi_i = _unique_pairs(papers[has_inst], insts[has_inst], max(num_institutions, 1))

    return AffiliationTable(
        papers=papers,
        authors=authors,
        institutions=insts,
        paper_authors=CSR.from_pairs(pa_p, pa_a, num_papers),
        author_papers=CSR.from_pairs(pa_a, pa_p, num_authors),
        paper_institutions=CSR.from_pairs(pi_p, pi_i, num_papers),
        institution_papers=CSR.from_pairs(pi_i, pi_p, num_institutions),
    )


class _ScoreFields(NamedTuple):
    s_pub: float
    s_age: float
    s_pr: float
    s_auth: float
    s_venue: float
    s_inst: float


class ScoreVector(_ScoreFields):
    """The six component scores of one paper; all finite."""

    __slots__ = ()

    def __new__(cls, s_pub, s_age, s_pr, s_auth, s_venue, s_inst):
        values = tuple(float(v) for v in (s_pub, s_age, s_pr, s_auth, s_venue, s_inst))
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"non-finite component score in {values}")
        return super().__new__(cls, *values)


@dataclass(frozen=True, eq=False)
class Corpus:
    """Everything ingested from one set of input files."""

    papers: Interner
    authors: Interner
    venues: Interner
    institutions: Interner
    meta: PaperMeta
    graph: CitationGraph
    affiliations: AffiliationTable

    @property
    def num_papers(self) -> int:
        return len(self.papers)


def citation_count(graph: CitationGraph, p: int) -> int:
    """Number of distinct papers citing ``p``."""
    if not 0 <= p < graph.num_papers:
        raise IndexError(f"paper index {p} out of range")
    return int(graph.reverse.indptr[p + 1] - graph.reverse.indptr[p])
