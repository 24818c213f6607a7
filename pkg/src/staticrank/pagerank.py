"""PageRank on the citation graph augmented with a dummy paper.

The dummy cites and is cited by every real paper, so no node is dangling and
the dummy spreads its rank uniformly back over the corpus. Rather than adding
2N edges, the iteration treats each real paper's out-degree as
``outdeg + 1`` and adds the dummy's share as a constant term:

    x'[v] = (1-d)/(N+1) + d * (sum_{u->v} x[u]/(k_u+1) + x[D]/N)
    x'[D] = (1-d)/(N+1) + d * sum_u x[u]/(k_u+1)

Rank flows from the citing paper to the cited one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .graph import CitationGraph

ORACLE_MAX_PAPERS = 2000


class ReportBasis(enum.Enum):
    INCLUDE_DUMMY = "include_dummy"
    RENORMALIZE_REAL_ONLY = "renormalize"


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-9
    max_iterations: int = 200
    report_basis: ReportBasis = ReportBasis.RENORMALIZE_REAL_ONLY

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must lie in (0, 1), got {self.damping}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True, eq=False)
class PageRankResult:
    scores: np.ndarray
    iterations_run: int
    converged: bool
    dummy_mass: float


#: Called after every iteration with (iteration, augmented vector); the
#: dummy's entry is last.
IterationCallback = Callable[[int, np.ndarray], None]


def _finish(x: np.ndarray, iterations: int, converged: bool,
            config: PageRankConfig) -> PageRankResult:
    real, dummy = x[:-1].copy(), float(x[-1])
    if config.report_basis is ReportBasis.RENORMALIZE_REAL_ONLY:
        real /= math.fsum(real)
    return PageRankResult(real, iterations, converged, dummy)


def compute_pagerank(graph: CitationGraph, config: PageRankConfig = PageRankConfig(),
                     callback: IterationCallback | None = None) -> PageRankResult:
    """Power iteration with the dummy handled implicitly."""
    n = graph.num_papers
    if n == 0:
        raise ValueError("empty graph")
    d = config.damping
    # reverse CSR == transpose of the adjacency matrix: row v lists citers of v
    rev = graph.reverse
    at = sp.csr_matrix(
        (np.ones(rev.nnz, dtype=np.float64), rev.indices, rev.indptr), shape=(n, n)
    )
    inv_out = 1.0 / (graph.forward.degrees() + 1).astype(np.float64)
    teleport = (1.0 - d) / (n + 1)

    x = np.full(n + 1, 1.0 / (n + 1))
    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        share = x[:-1] * inv_out
        new = np.empty_like(x)
        new[:-1] = teleport + d * (at @ share + x[-1] / n)
        new[-1] = teleport + d * share.sum()
        delta = np.abs(new - x).sum()
        x = new
        if callback is not None:
            callback(it, x)
        if delta < config.tolerance:
            converged = True
            break
    return _finish(x, it, converged, config)


def explicit_dummy_oracle(graph: CitationGraph, config: PageRankConfig = PageRankConfig(),
                          callback: IterationCallback | None = None) -> PageRankResult:
    """Dense reference: materialise the (N+1)x(N+1) augmented transition matrix."""
    n = graph.num_papers
    if n == 0:
        raise ValueError("empty graph")
    if n > ORACLE_MAX_PAPERS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_PAPERS} papers, got {n}")
    size = n + 1
    adj = np.zeros((size, size))
    src, dst = graph.edges()
    adj[src, dst] = 1.0
    adj[:n, n] = 1.0  # every paper cites the dummy
    adj[n, :n] = 1.0  # the dummy cites every paper
    # column-stochastic: M[v, u] = P(u -> v)
    m = (adj / adj.sum(axis=1, keepdims=True)).T
    d = config.damping

    x = np.full(size, 1.0 / size)
    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        new = (1.0 - d) / size + d * (m @ x)
        delta = np.abs(new - x).sum()
        x = new
        if callback is not None:
            callback(it, x)
        if delta < config.tolerance:
            converged = True
            break
    return _finish(x, it, converged, config)
