"""Query-independent static ranking of scholarly publications.

Scores every paper from its citations, age, PageRank on a dummy-augmented
citation graph, and the records of its authors, venue and institutions, then
ranks papers by a weighted sum of those scores.
"""

__version__ = "0.1.0"

from .combine import (
    PAPER_WEIGHTS,
    ComponentScores,
    Normalization,
    RankedList,
    WeightVector,
    combine,
    compute_component_scores,
    rank,
    rank_correlation,
)
from .evaluate import JudgementSet, TiePolicy, grid_search_weights, pairwise_agreement
from .graph import COMPONENTS, AffiliationTable, CitationGraph, Corpus, PaperMeta, ScoreVector
from .ingest import IngestReport, load_corpus
from .pagerank import PageRankConfig, PageRankResult, ReportBasis, compute_pagerank
from .scores import ScoringConfig

__all__ = [
    "COMPONENTS",
    "PAPER_WEIGHTS",
    "AffiliationTable",
    "CitationGraph",
    "ComponentScores",
    "Corpus",
    "IngestReport",
    "JudgementSet",
    "Normalization",
    "PageRankConfig",
    "PageRankResult",
    "PaperMeta",
    "RankedList",
    "ReportBasis",
    "ScoreVector",
    "ScoringConfig",
    "TiePolicy",
    "WeightVector",
    "combine",
    "compute_component_scores",
    "compute_pagerank",
    "grid_search_weights",
    "load_corpus",
    "pairwise_agreement",
    "rank",
    "rank_correlation",
]
