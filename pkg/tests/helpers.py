"""Independent oracles and corpus builders shared by the test modules.

The oracles work on plain Python sets and dicts built from the raw rows, never
on the package's CSR structures, so they check the package rather than
restate it.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field

from staticrank.graph import Corpus
from staticrank.ingest import IngestReport, ingest_affiliations, ingest_papers, ingest_references

# criterion label -> "PASS"/"FAIL"; printed by conftest's terminal summary
ACCEPTANCE_RESULTS: dict[str, str] = {}


def corpus_from_rows(papers, references=(), affiliations=()) -> tuple[Corpus, IngestReport]:
    report = IngestReport()
    meta, pids, venues = ingest_papers(papers, report.papers)
    graph = ingest_references(references, pids, report.references)
    affils, authors, insts = ingest_affiliations(affiliations, pids, report.affiliations)
    return Corpus(pids, authors, venues, insts, meta, graph, affils), report


@dataclass
class RawCorpus:
    """A corpus as plain Python data, plus its TSV rows."""

    papers: dict[str, tuple[int | None, str | None]]
    edges: set[tuple[str, str]]
    triples: set[tuple[str, str, str | None]]
    order: list[str] = field(default_factory=list)

    def paper_rows(self):
        return [f"{p}\t{'' if y is None else y}\t{v or ''}"
                for p, (y, v) in ((p, self.papers[p]) for p in self.order)]

    def reference_rows(self):
        return [f"{a}\t{b}" for a, b in sorted(self.edges)]

    def affiliation_rows(self):
        return [f"{p}\t{a}\t{i or ''}" for p, a, i in sorted(self.triples, key=str)]

    def build(self):
        return corpus_from_rows(self.paper_rows(), self.reference_rows(), self.affiliation_rows())


def random_raw_corpus(rng: random.Random, max_papers=100, max_authors=30, max_venues=10,
                      max_insts=10, density=None) -> RawCorpus:
    n = rng.randint(1, max_papers)
    n_auth = rng.randint(1, max_authors)
    n_ven = rng.randint(1, max_venues)
    n_inst = rng.randint(1, max_insts)
    order = [f"p{i}" for i in range(n)]
    rng.shuffle(order)
    papers = {}
    for p in order:
        year = None if rng.random() < 0.1 else rng.randint(1990, 2015)
        venue = None if rng.random() < 0.2 else f"v{rng.randrange(n_ven)}"
        papers[p] = (year, venue)
    density = rng.random() if density is None else density
    edges = {(a, b) for a in order for b in order if a != b and rng.random() < density * 0.3}
    triples = set()
    for p in order:
        for _ in range(rng.randint(0, 4)):
            inst = None if rng.random() < 0.25 else f"i{rng.randrange(n_inst)}"
            triples.add((p, f"a{rng.randrange(n_auth)}", inst))
    return RawCorpus(papers, edges, triples, order)


# -- naive enumerators -------------------------------------------------------

def naive_citations(raw: RawCorpus) -> dict[str, int]:
    c = {p: 0 for p in raw.papers}
    for _, cited in raw.edges:
        c[cited] += 1
    return c


def naive_authors_of(raw: RawCorpus) -> dict[str, set[str]]:
    out = defaultdict(set)
    for p, a, _ in raw.triples:
        out[p].add(a)
    return out


def naive_pub(raw: RawCorpus, t=5000, round2=True) -> dict[str, float]:
    c = naive_citations(raw)
    authors = naive_authors_of(raw)
    out = {}
    for p in raw.papers:
        n = len(authors[p])
        if n == 0:
            out[p] = 0.0
        elif c[p] <= t:
            out[p] = c[p] / n
        else:
            out[p] = t / n if round2 else 0.0
    return out


def naive_author(raw: RawCorpus) -> dict[str, float]:
    c = naive_citations(raw)
    authors = naive_authors_of(raw)
    papers_of = defaultdict(set)
    for p, a, _ in raw.triples:
        papers_of[a].add(p)
    out = {}
    for p in raw.papers:
        if not authors[p]:
            out[p] = 0.0
            continue
        means = [sum(c[x] for x in papers_of[a]) / len(papers_of[a]) for a in authors[p]]
        out[p] = math.fsum(means) / len(means)
    return out


def naive_venue(raw: RawCorpus, mean=False) -> dict[str, float]:
    c = naive_citations(raw)
    out = {}
    for p, (_, v) in raw.papers.items():
        if v is None:
            out[p] = 0.0
            continue
        others = [x for x, (_, vx) in raw.papers.items() if vx == v and x != p]
        total = sum(c[x] for x in others)
        out[p] = (total / len(others) if others else 0.0) if mean else float(total)
    return out


def naive_institution(raw: RawCorpus) -> dict[str, float]:
    c = naive_citations(raw)
    insts_of = defaultdict(set)
    papers_of = defaultdict(set)
    for p, _, i in raw.triples:
        if i is not None:
            insts_of[p].add(i)
            papers_of[i].add(p)
    out = {}
    for p in raw.papers:
        if not insts_of[p]:
            out[p] = 0.0
            continue
        sums = [sum(c[x] for x in papers_of[i] if x != p) for i in insts_of[p]]
        out[p] = math.fsum(sums) / len(sums)
    return out


def brute_h_index(values) -> int:
    values = list(values)
    best = 0
    for h in range(len(values) + 1):
        if sum(1 for v in values if v >= h) >= h:
            best = h
    return best


def rel_close(a: float, b: float, rel=1e-12) -> bool:
    return a == b or abs(a - b) <= rel * max(abs(a), abs(b))
