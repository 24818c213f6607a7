"""Citation-, age-, author-, venue- and institution-based paper scores.

Each score comes in two forms: a per-paper function taking a paper index
(handy for inspection and tests) and a vectorised ``*_scores`` function that
returns the score for every paper at once. Both follow the same rules:

* a paper with no authors gets 0 wherever the score divides by ``|A_p|``;
* a missing year gives ``s_age = 0`` and zero weight as a citer under decay;
* venue and institution totals never include the paper's own citations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .graph import ABSENT, YEAR_ABSENT, AffiliationTable, CitationGraph, PaperMeta, citation_count

DEFAULT_THRESHOLD = 5000
DEFAULT_ALPHA = 0.1


class Round(enum.Enum):
    ROUND1 = 1
    ROUND2 = 2


class Aggregation(enum.Enum):
    MEAN = "mean"
    MAX = "max"
    TOTAL = "total"


class AuthorBase(enum.Enum):
    MEAN_CITATIONS_PER_PAPER = "mean"
    TOTAL_CITATIONS = "total"
    H_INDEX = "hindex"


class VenueVariant(enum.Enum):
    TOTAL_CITATIONS = "total"
    MEAN_PER_PAPER = "mean"


class MeanMode(enum.Enum):
    PER_YEAR = "year"
    PER_AUTHOR = "author"
    PER_YEAR_AND_AUTHOR = "year_author"


@dataclass(frozen=True)
class ScoringConfig:
    """Knobs for the non-PageRank scores. Defaults are the final-submission choices.

    ``current_year=None`` means "latest publication year in the corpus".
    """

    threshold: int = DEFAULT_THRESHOLD
    alpha: float = DEFAULT_ALPHA
    current_year: int | None = None
    round: Round = Round.ROUND2
    author_aggregation: Aggregation = Aggregation.MEAN
    author_base: AuthorBase = AuthorBase.MEAN_CITATIONS_PER_PAPER
    venue_variant: VenueVariant = VenueVariant.TOTAL_CITATIONS

    def __post_init__(self):
        if int(self.threshold) != self.threshold or self.threshold < 1:
            raise ValueError(f"threshold must be a positive integer, got {self.threshold}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def resolved(self, meta: PaperMeta) -> "ScoringConfig":
        """Copy with ``current_year`` filled in from the corpus."""
        if self.current_year is not None:
            return self
        return replace(self, current_year=meta.max_year() or 0)


def _current_year(config: ScoringConfig, meta: PaperMeta) -> int:
    return config.resolved(meta).current_year


def _check_paper(p: int, n: int) -> None:
    if not 0 <= p < n:
        raise IndexError(f"paper index {p} out of range")


# -- h-index -----------------------------------------------------------------

def h_index(citation_counts) -> int:
    """Largest h such that at least h of the counts are >= h."""
    counts = sorted((int(c) for c in citation_counts), reverse=True)
    h = 0
    for i, c in enumerate(counts, start=1):
        if c < i:
            break
        h = i
    return h


def grouped_h_index(groups: np.ndarray, values: np.ndarray, n_groups: int) -> np.ndarray:
    """h-index of ``values`` within each group id in ``range(n_groups)``."""
    groups = np.asarray(groups, dtype=np.int64)
    values = np.asarray(values, dtype=np.int64)
    out = np.zeros(n_groups, dtype=np.int64)
    if groups.size == 0:
        return out
    order = np.lexsort((-values, groups))
    g, v = groups[order], values[order]
    starts = np.flatnonzero(np.r_[True, g[1:] != g[:-1]])
    first = np.repeat(starts, np.diff(np.r_[starts, g.size]))
    position = np.arange(g.size) - first + 1
    # within a group sorted descending, c_i >= i holds on a prefix
    np.add.at(out, g, (v >= position).astype(np.int64))
    return out


# -- publication-based -------------------------------------------------------

def _pub_value(c: int, n_authors: int, config: ScoringConfig) -> float:
    if n_authors == 0:
        return 0.0
    if c <= config.threshold:
        return c / n_authors
    if config.round is Round.ROUND1:
        return 0.0
    return config.threshold / n_authors


def score_pub(p: int, graph: CitationGraph, affils: AffiliationTable,
              config: ScoringConfig = ScoringConfig()) -> float:
    """Citations per author, capped at the threshold (zeroed above it in round 1)."""
    c = citation_count(graph, p)
    return _pub_value(c, len(affils.paper_authors.row(p)), config)


def pub_scores(graph: CitationGraph, affils: AffiliationTable,
               config: ScoringConfig = ScoringConfig()) -> np.ndarray:
    c = graph.citation_counts()
    n_auth = affils.paper_authors.degrees()
    t = config.threshold
    above = 0 if config.round is Round.ROUND1 else t
    capped = np.where(c <= t, c, above).astype(np.float64)
    out = np.zeros(len(c), dtype=np.float64)
    np.divide(capped, n_auth, out=out, where=n_auth > 0)
    return out


def score_age(p: int, meta: PaperMeta) -> float:
    _check_paper(p, meta.num_papers)
    return float(meta.year[p])


def age_scores(meta: PaperMeta) -> np.ndarray:
    return meta.year.astype(np.float64)


def _decay_weights(citer_years: np.ndarray, alpha: float, current_year: int) -> np.ndarray:
    age = np.maximum(current_year - citer_years, 0).astype(np.float64)
    w = np.exp(-alpha * age)
    return np.where(citer_years == YEAR_ABSENT, 0.0, w)


def score_citations_decayed(p: int, graph: CitationGraph, meta: PaperMeta,
                            config: ScoringConfig = ScoringConfig()) -> float:
    """Sum of exp(-alpha * (t_c - y_q)) over citing papers q."""
    _check_paper(p, graph.num_papers)
    tc = _current_year(config, meta)
    total = 0.0
    for q in graph.reverse.row(p).tolist():
        y = int(meta.year[q])
        if y == YEAR_ABSENT:
            continue
        total += math.exp(-config.alpha * max(tc - y, 0))
    return total


def decayed_citation_scores(graph: CitationGraph, meta: PaperMeta,
                            config: ScoringConfig = ScoringConfig()) -> np.ndarray:
    tc = _current_year(config, meta)
    cited = graph.reverse.row_ids()
    citers = graph.reverse.indices
    w = _decay_weights(meta.year[citers], config.alpha, tc)
    return np.bincount(cited, weights=w, minlength=graph.num_papers).astype(np.float64)


def _years_since(year: np.ndarray | int, current_year: int):
    # at least one year, so current-year (or future-dated) papers never divide by 0
    return np.maximum(current_year - np.asarray(year) + 1, 1)


def score_citations_mean(p: int, graph: CitationGraph, meta: PaperMeta,
                         affils: AffiliationTable, config: ScoringConfig = ScoringConfig(),
                         mode: MeanMode = MeanMode.PER_YEAR) -> float:
    """Citations per year since publication, per author, or per both."""
    c = citation_count(graph, p)
    n_auth = len(affils.paper_authors.row(p))
    year = int(meta.year[p])
    denom = 1
    if mode in (MeanMode.PER_YEAR, MeanMode.PER_YEAR_AND_AUTHOR):
        if year == YEAR_ABSENT:
            return 0.0
        denom *= int(_years_since(year, _current_year(config, meta)))
    if mode in (MeanMode.PER_AUTHOR, MeanMode.PER_YEAR_AND_AUTHOR):
        if n_auth == 0:
            return 0.0
        denom *= n_auth
    return c / denom


def mean_citation_scores(graph: CitationGraph, meta: PaperMeta, affils: AffiliationTable,
                         config: ScoringConfig = ScoringConfig(),
                         mode: MeanMode = MeanMode.PER_YEAR) -> np.ndarray:
    c = graph.citation_counts().astype(np.float64)
    denom = np.ones(len(c), dtype=np.int64)
    valid = np.ones(len(c), dtype=bool)
    if mode in (MeanMode.PER_YEAR, MeanMode.PER_YEAR_AND_AUTHOR):
        denom *= _years_since(meta.year, _current_year(config, meta))
        valid &= meta.has_year
    if mode in (MeanMode.PER_AUTHOR, MeanMode.PER_YEAR_AND_AUTHOR):
        n_auth = affils.paper_authors.degrees()
        denom *= n_auth
        valid &= n_auth > 0
    out = np.zeros(len(c), dtype=np.float64)
    np.divide(c, denom, out=out, where=valid)
    return out


# -- author-based ------------------------------------------------------------

def author_base_values(graph: CitationGraph, affils: AffiliationTable,
                       base: AuthorBase = AuthorBase.MEAN_CITATIONS_PER_PAPER) -> np.ndarray:
    """Per-author value: mean or total citations over P_a, or the h-index."""
    c = graph.citation_counts()
    ap = affils.author_papers
    n_authors = ap.n_rows
    owner = ap.row_ids()
    paper_c = c[ap.indices]
    if base is AuthorBase.H_INDEX:
        return grouped_h_index(owner, paper_c, n_authors).astype(np.float64)
    totals = np.bincount(owner, weights=paper_c, minlength=n_authors)
    if base is AuthorBase.TOTAL_CITATIONS:
        return totals
    # every interned author has >= 1 paper
    n_papers = ap.degrees()
    out = np.zeros(n_authors, dtype=np.float64)
    np.divide(totals, n_papers, out=out, where=n_papers > 0)
    return out


def _author_value(a: int, graph: CitationGraph, affils: AffiliationTable,
                  base: AuthorBase) -> float:
    counts = [citation_count(graph, x) for x in affils.author_papers.row(a).tolist()]
    if base is AuthorBase.H_INDEX:
        return float(h_index(counts))
    if base is AuthorBase.TOTAL_CITATIONS:
        return float(sum(counts))
    return sum(counts) / len(counts) if counts else 0.0


def _aggregate(values: list[float], how: Aggregation) -> float:
    if not values:
        return 0.0
    if how is Aggregation.MAX:
        return max(values)
    total = math.fsum(values)
    return total / len(values) if how is Aggregation.MEAN else total


def score_author(p: int, graph: CitationGraph, affils: AffiliationTable,
                 config: ScoringConfig = ScoringConfig()) -> float:
    """Aggregate over p's authors of each author's citation record (P_a includes p)."""
    _check_paper(p, graph.num_papers)
    values = [_author_value(a, graph, affils, config.author_base)
              for a in affils.paper_authors.row(p).tolist()]
    return _aggregate(values, config.author_aggregation)


def _reduce_rows(csr, per_entry: np.ndarray, how: Aggregation) -> np.ndarray:
    n = csr.n_rows
    deg = csr.degrees()
    out = np.zeros(n, dtype=np.float64)
    if csr.nnz == 0:
        return out
    nonempty = deg > 0
    starts = csr.indptr[:-1][nonempty]
    if how is Aggregation.MAX:
        out[nonempty] = np.maximum.reduceat(per_entry, starts)
        return out
    out[nonempty] = np.add.reduceat(per_entry, starts)
    if how is Aggregation.MEAN:
        out[nonempty] /= deg[nonempty]
    return out


def author_scores(graph: CitationGraph, affils: AffiliationTable,
                  config: ScoringConfig = ScoringConfig()) -> np.ndarray:
    values = author_base_values(graph, affils, config.author_base)
    pa = affils.paper_authors
    return _reduce_rows(pa, values[pa.indices], config.author_aggregation)


# -- venue-based -------------------------------------------------------------

def score_venue(p: int, graph: CitationGraph, meta: PaperMeta,
                config: ScoringConfig = ScoringConfig()) -> float:
    """Citations of the other papers at p's venue (total or mean per paper)."""
    _check_paper(p, graph.num_papers)
    v = int(meta.venue[p])
    if v == ABSENT:
        return 0.0
    others = [x for x in np.flatnonzero(meta.venue == v).tolist() if x != p]
    total = sum(citation_count(graph, x) for x in others)
    if config.venue_variant is VenueVariant.MEAN_PER_PAPER:
        return total / len(others) if others else 0.0
    return float(total)


def venue_scores(graph: CitationGraph, meta: PaperMeta,
                 config: ScoringConfig = ScoringConfig()) -> np.ndarray:
    c = graph.citation_counts()
    has_venue = meta.venue != ABSENT
    n_venues = int(meta.venue.max()) + 1 if has_venue.any() else 0
    v = meta.venue[has_venue]
    totals = np.bincount(v, weights=c[has_venue], minlength=n_venues)
    sizes = np.bincount(v, minlength=n_venues)
    out = np.zeros(len(c), dtype=np.float64)
    others = totals[v] - c[has_venue]
    if config.venue_variant is VenueVariant.MEAN_PER_PAPER:
        n_other = sizes[v] - 1
        mean = np.zeros(len(v), dtype=np.float64)
        np.divide(others, n_other, out=mean, where=n_other > 0)
        others = mean
    out[has_venue] = others
    return out


# -- institution-based -------------------------------------------------------

def score_institution(p: int, graph: CitationGraph, affils: AffiliationTable,
                      config: ScoringConfig = ScoringConfig()) -> float:
    """Mean over p's institutions of the citations of their other papers."""
    _check_paper(p, graph.num_papers)
    insts = affils.paper_institutions.row(p).tolist()
    if not insts:
        return 0.0
    sums = []
    for i in insts:
        sums.append(sum(citation_count(graph, x)
                        for x in affils.institution_papers.row(i).tolist() if x != p))
    return math.fsum(sums) / len(sums)


def institution_scores(graph: CitationGraph, affils: AffiliationTable,
                       config: ScoringConfig = ScoringConfig()) -> np.ndarray:
    c = graph.citation_counts()
    ip = affils.institution_papers
    totals = np.bincount(ip.row_ids(), weights=c[ip.indices], minlength=ip.n_rows)
    pi = affils.paper_institutions
    # p belongs to every P_i with i in I_p, so subtract c(p) once per institution
    per_entry = totals[pi.indices] - c[pi.row_ids()]
    return _reduce_rows(pi, per_entry, Aggregation.MEAN)
