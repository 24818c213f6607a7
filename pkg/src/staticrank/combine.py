"""Linear combination of component scores and deterministic ranking."""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .graph import COMPONENTS, Corpus, ScoreVector
from .pagerank import PageRankConfig, compute_pagerank
from .scores import (
    ScoringConfig,
    age_scores,
    author_scores,
    institution_scores,
    pub_scores,
    venue_scores,
)


class Normalization(enum.Enum):
    NONE = "none"
    MINMAX = "minmax"


class WeightVector(NamedTuple):
    w_pub: float = 2.5
    w_age: float = 0.1
    w_pr: float = 1.0
    w_auth: float = 1.0
    w_venue: float = 0.1
    w_inst: float = 0.01

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        """Parse ``"w1,w2,w3,w4,w5,w6"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != len(COMPONENTS):
            raise ValueError(f"expected {len(COMPONENTS)} weights, got {len(parts)}")
        return cls.checked(*(float(p) for p in parts))

    @classmethod
    def checked(cls, *values: float) -> "WeightVector":
        w = cls(*(float(v) for v in values))
        if not all(math.isfinite(v) for v in w):
            raise ValueError(f"non-finite weight in {tuple(w)}")
        return w

    def format(self) -> str:
        return ",".join(repr(v) for v in self)


PAPER_WEIGHTS = WeightVector()


@dataclass(frozen=True, eq=False)
class ComponentScores:
    """The six component scores for every paper, one column per component."""

    paper_ids: Sequence[str]
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.paper_ids), len(COMPONENTS)):
            raise ValueError(f"score matrix has shape {self.values.shape}")
        if not np.isfinite(self.values).all():
            raise ValueError("component scores must be finite")

    def __len__(self) -> int:
        return len(self.paper_ids)

    def vector(self, p: int) -> ScoreVector:
        return ScoreVector(*self.values[p])

    def column(self, name: str) -> np.ndarray:
        return self.values[:, COMPONENTS.index(name)]

    def write_tsv(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", errors="surrogateescape", newline="\n") as fh:
            for pid, row in zip(self.paper_ids, self.values.tolist()):
                fh.write(pid + "\t" + "\t".join(format(v, ".17g") for v in row) + "\n")


def compute_component_scores(
    corpus: Corpus,
    scoring: ScoringConfig = ScoringConfig(),
    pagerank: PageRankConfig = PageRankConfig(),
    enabled: Sequence[str] = COMPONENTS,
) -> ComponentScores:
    """Evaluate every enabled component for every paper; disabled columns stay 0."""
    unknown = set(enabled) - set(COMPONENTS)
    if unknown:
        raise ValueError(f"unknown components {sorted(unknown)}")
    if corpus.num_papers == 0:
        raise ValueError("empty corpus")
    scoring = scoring.resolved(corpus.meta)
    g, meta, affils = corpus.graph, corpus.meta, corpus.affiliations
    builders = {
        "s_pub": lambda: pub_scores(g, affils, scoring),
        "s_age": lambda: age_scores(meta),
        "s_pr": lambda: compute_pagerank(g, pagerank).scores,
        "s_auth": lambda: author_scores(g, affils, scoring),
        "s_venue": lambda: venue_scores(g, meta, scoring),
        "s_inst": lambda: institution_scores(g, affils, scoring),
    }
    values = np.zeros((corpus.num_papers, len(COMPONENTS)), dtype=np.float64)
    for k, name in enumerate(COMPONENTS):
        if name in enabled:
            values[:, k] = builders[name]()
    return ComponentScores(corpus.papers.raw_ids, values)


def _minmax(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(axis=0), values.max(axis=0)
    span = hi - lo
    out = np.zeros_like(values)
    np.divide(values - lo, span, out=out, where=span > 0)
    return out


def combine(scores: ComponentScores | np.ndarray, weights: WeightVector = PAPER_WEIGHTS,
            normalization: Normalization = Normalization.NONE) -> np.ndarray:
    """Weighted sum of the six components per paper.

    Each sum is correctly rounded (``math.fsum``), so the result does not
    depend on summation order.
    """
    values = scores.values if isinstance(scores, ComponentScores) else np.asarray(scores, float)
    if values.ndim != 2 or values.shape[1] != len(COMPONENTS):
        raise ValueError(f"expected an (N, {len(COMPONENTS)}) score matrix")
    if not np.isfinite(values).all():
        raise ValueError("component scores must be finite")
    if values.shape[0] and normalization is Normalization.MINMAX:
        values = _minmax(values)
    products = values * np.asarray(weights, dtype=np.float64)
    return np.fromiter((math.fsum(row) for row in products.tolist()),
                       dtype=np.float64, count=len(products))


class RankedEntry(NamedTuple):
    paper_id: str
    score: float
    rank: int


@dataclass(frozen=True, eq=False)
class RankedList:
    """Papers in descending score order; ties go to the bytewise-smaller id."""

    paper_ids: tuple[str, ...]
    scores: np.ndarray

    def __len__(self) -> int:
        return len(self.paper_ids)

    def __iter__(self) -> Iterator[RankedEntry]:
        for i, (pid, s) in enumerate(zip(self.paper_ids, self.scores.tolist()), start=1):
            yield RankedEntry(pid, s, i)

    def __getitem__(self, i: int) -> RankedEntry:
        return RankedEntry(self.paper_ids[i], float(self.scores[i]), i + 1)

    def score_map(self) -> dict[str, float]:
        return dict(zip(self.paper_ids, self.scores.tolist()))

    def rank_map(self) -> dict[str, int]:
        return {pid: i for i, pid in enumerate(self.paper_ids, start=1)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RankedList):
            return NotImplemented
        return self.paper_ids == other.paper_ids and np.array_equal(self.scores, other.scores)

    def write_tsv(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", errors="surrogateescape", newline="\n") as fh:
            for pid, s in zip(self.paper_ids, self.scores.tolist()):
                fh.write(f"{pid}\t{format(s, '.17g')}\n")

    @classmethod
    def read_tsv(cls, path: str | os.PathLike) -> "RankedList":
        """Read a ranking file and re-rank it (order in the file is not trusted)."""
        ids, scores = [], []
        with open(path, "r", encoding="utf-8", errors="surrogateescape", newline="\n") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\r\n")
                if not line:
                    continue
                cols = line.split("\t")
                if len(cols) != 2 or not cols[0]:
                    raise ValueError(f"{path}:{lineno}: expected 'paper_id<TAB>score'")
                ids.append(cols[0])
                scores.append(float(cols[1]))
        if len(set(ids)) != len(ids):
            raise ValueError(f"{path}: duplicate paper id in ranking")
        return rank(ids, scores)


def _id_key(pid: str) -> bytes:
    return pid.encode("utf-8", "surrogateescape")


def rank(paper_ids: Sequence[str], scores) -> RankedList:
    """Sort by descending score, then ascending raw id bytes."""
    scores = np.asarray(scores, dtype=np.float64)
    if len(paper_ids) != len(scores):
        raise ValueError("paper_ids and scores differ in length")
    if not np.isfinite(scores).all():
        raise ValueError("scores must be finite")
    by_id = sorted(range(len(paper_ids)), key=lambda i: _id_key(paper_ids[i]))
    id_rank = np.empty(len(paper_ids), dtype=np.int64)
    id_rank[by_id] = np.arange(len(paper_ids))
    order = np.lexsort((id_rank, -scores))
    return RankedList(tuple(paper_ids[i] for i in order.tolist()), scores[order])


def rank_correlation(list_a: RankedList, list_b: RankedList) -> float:
    """Spearman correlation between two ordinal rankings of the same papers."""
    if set(list_a.paper_ids) != set(list_b.paper_ids) or len(list_a) != len(list_b):
        raise ValueError("rankings cover different paper sets")
    n = len(list_a)
    if n < 2:
        return 1.0
    rb = list_b.rank_map()
    d2 = sum((i - rb[pid]) ** 2 for i, pid in enumerate(list_a.paper_ids, start=1))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))
