"""Seeded synthetic corpora for tests, benchmarks and demos.

Papers are numbered in publication order and cite older papers, with a bias
toward the oldest ones. Optionally a fraction of malformed rows is planted in
each file; every planted row is one the ingester must reject, and no clean
row is ever rejected, so rejected counts equal planted counts exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SyntheticSpec:
    n_papers: int = 1000
    n_edges: int = 5000
    n_triples: int = 3000
    n_authors: int | None = None
    n_venues: int | None = None
    n_institutions: int | None = None
    first_year: int = 1970
    last_year: int = 2015
    missing_year_rate: float = 0.03
    missing_venue_rate: float = 0.1
    missing_institution_rate: float = 0.15
    corrupt_fraction: float = 0.0
    seed: int = 0


def paper_id(i: int) -> str:
    return f"P{i:08d}"


def _corrupt_papers(rng, k, n):
    out = []
    for j in range(k):
        pid = paper_id(int(rng.integers(n)))
        kind = j % 4
        if kind == 0:
            out.append(f"{pid}\tabc\tV0")
        elif kind == 1:
            out.append(f"{pid}\t999\t")
        elif kind == 2:
            out.append(pid)
        else:
            out.append(f"{pid}\t2000\tV0\textra")
    return out


def _corrupt_references(rng, k, n):
    out = []
    for j in range(k):
        pid = paper_id(int(rng.integers(n)))
        kind = j % 3
        if kind == 0:
            out.append(f"BOGUS{j}\t{pid}")
        elif kind == 1:
            out.append(f"{pid}\tMISSING{j}")
        else:
            out.append(f"{pid}\t{pid}\t{pid}")
    return out


def _corrupt_affiliations(rng, k, n):
    out = []
    for j in range(k):
        pid = paper_id(int(rng.integers(n)))
        kind = j % 3
        if kind == 0:
            out.append(f"NOPAPER{j}\tA0\tI0")
        elif kind == 1:
            out.append(f"{pid}\tA0")
        else:
            out.append(f"{pid}\t\tI0")
    return out


def _plant(rng, lines: list[str], bad: list[str]) -> list[str]:
    if not bad:
        return lines
    total = len(lines) + len(bad)
    slots = np.sort(rng.choice(total, size=len(bad), replace=False))
    out, it_good, it_bad = [], iter(lines), iter(bad)
    is_bad = np.zeros(total, dtype=bool)
    is_bad[slots] = True
    for flag in is_bad.tolist():
        out.append(next(it_bad) if flag else next(it_good))
    return out


def _n_corrupt(n_good: int, fraction: float) -> int:
    if fraction <= 0:
        return 0
    return int(round(fraction * n_good / (1.0 - fraction)))


def _write(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
        if lines:
            fh.write("\n")


def generate_corpus(out_dir: str | os.PathLike, spec: SyntheticSpec = SyntheticSpec()) -> dict:
    """Write papers.tsv, references.tsv and affiliations.tsv into ``out_dir``.

    Returns the number of planted malformed rows per file.
    """
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(spec.seed)
    n = spec.n_papers
    n_authors = spec.n_authors or max(1, int(n * 0.6))
    n_venues = spec.n_venues or max(1, n // 50)
    n_insts = spec.n_institutions or max(1, n // 100)
    ids = [paper_id(i) for i in range(n)]

    years = np.sort(rng.integers(spec.first_year, spec.last_year + 1, size=n))
    no_year = rng.random(n) < spec.missing_year_rate
    venues = rng.zipf(1.5, size=n) % n_venues
    no_venue = rng.random(n) < spec.missing_venue_rate
    paper_lines = [
        f"{pid}\t{'' if ny else y}\t{'' if nv else 'V%d' % v}"
        for pid, y, ny, v, nv in zip(ids, years.tolist(), no_year.tolist(),
                                     venues.tolist(), no_venue.tolist())
    ]

    citing = rng.integers(0, n, size=spec.n_edges)
    # cite older papers, skewed toward early ones
    cited = (citing * rng.random(spec.n_edges) ** 1.5).astype(np.int64)
    ref_lines = [f"{ids[a]}\t{ids[b]}" for a, b in zip(citing.tolist(), cited.tolist())]

    t_papers = rng.integers(0, n, size=spec.n_triples)
    t_authors = rng.zipf(1.3, size=spec.n_triples) % n_authors
    t_insts = t_authors % n_insts
    no_inst = rng.random(spec.n_triples) < spec.missing_institution_rate
    aff_lines = [
        f"{ids[p]}\tA{a}\t{'' if ni else 'I%d' % i}"
        for p, a, i, ni in zip(t_papers.tolist(), t_authors.tolist(),
                               t_insts.tolist(), no_inst.tolist())
    ]

    planted = {}
    for name, lines, make in (
        ("papers", paper_lines, _corrupt_papers),
        ("references", ref_lines, _corrupt_references),
        ("affiliations", aff_lines, _corrupt_affiliations),
    ):
        bad = make(rng, _n_corrupt(len(lines), spec.corrupt_fraction), n)
        planted[name] = len(bad)
        _write(os.path.join(out_dir, f"{name}.tsv"), _plant(rng, lines, bad))
    return planted
