"""Binary cache of an ingested corpus, so repeated ranking runs skip parsing.

Layout (all integers little-endian)::

    magic       4 bytes   b"SRNK"
    version     uint32    FORMAT_VERSION
    n_sections  uint32
    section * n_sections:
        name_len    uint16
        name        name_len bytes, ASCII
        kind        uint8     0 = int64 array, 1 = string list, 2 = JSON
        payload_len uint64
        payload     payload_len bytes

An int64 array payload is the raw ``<i8`` buffer. A string list payload is
the UTF-8 ids joined by ``\\n`` (ids never contain newlines and are never
empty, so an empty payload is an empty list). Sections written, in order:
the four id lists (``papers``, ``authors``, ``venues``, ``institutions``),
``year``, ``venue``, ``fwd_indptr``, ``fwd_indices``, ``rev_indptr``,
``rev_indices``, ``aff_papers``, ``aff_authors``, ``aff_institutions`` and
``report``. Affiliation indices are rebuilt from the triples on load.
"""

from __future__ import annotations

import json
import os
import struct

import numpy as np

from .graph import (
    CSR,
    CitationGraph,
    Corpus,
    EntityKind,
    Interner,
    PaperMeta,
    build_indices,
)
from .ingest import IngestReport

MAGIC = b"SRNK"
FORMAT_VERSION = 1

_ARRAY, _STRINGS, _JSON = 0, 1, 2


class CacheFormatError(ValueError):
    pass


def _section(name: str, kind: int, payload: bytes) -> bytes:
    raw = name.encode("ascii")
    return struct.pack("<H", len(raw)) + raw + struct.pack("<BQ", kind, len(payload)) + payload


def _strings(ids) -> bytes:
    return "\n".join(ids).encode("utf-8", "surrogateescape")


def _array(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype="<i8").tobytes()


def write_cache(path: str | os.PathLike, corpus: Corpus, report: IngestReport) -> None:
    g, a = corpus.graph, corpus.affiliations
    sections = [
        _section("papers", _STRINGS, _strings(corpus.papers)),
        _section("authors", _STRINGS, _strings(corpus.authors)),
        _section("venues", _STRINGS, _strings(corpus.venues)),
        _section("institutions", _STRINGS, _strings(corpus.institutions)),
        _section("year", _ARRAY, _array(corpus.meta.year)),
        _section("venue", _ARRAY, _array(corpus.meta.venue)),
        _section("fwd_indptr", _ARRAY, _array(g.forward.indptr)),
        _section("fwd_indices", _ARRAY, _array(g.forward.indices)),
        _section("rev_indptr", _ARRAY, _array(g.reverse.indptr)),
        _section("rev_indices", _ARRAY, _array(g.reverse.indices)),
        _section("aff_papers", _ARRAY, _array(a.papers)),
        _section("aff_authors", _ARRAY, _array(a.authors)),
        _section("aff_institutions", _ARRAY, _array(a.institutions)),
        _section("report", _JSON, json.dumps(report.to_dict(), sort_keys=True).encode()),
    ]
    with open(path, "wb") as fh:
        fh.write(MAGIC + struct.pack("<II", FORMAT_VERSION, len(sections)))
        for s in sections:
            fh.write(s)


def _read_sections(buf: bytes) -> dict:
    if buf[:4] != MAGIC:
        raise CacheFormatError("not a corpus cache (bad magic)")
    if len(buf) < 12:
        raise CacheFormatError("truncated cache header")
    version, n = struct.unpack_from("<II", buf, 4)
    if version != FORMAT_VERSION:
        raise CacheFormatError(f"unsupported cache version {version}")
    pos = 12
    out = {}
    try:
        for _ in range(n):
            (name_len,) = struct.unpack_from("<H", buf, pos)
            pos += 2
            name = buf[pos : pos + name_len].decode("ascii")
            pos += name_len
            kind, size = struct.unpack_from("<BQ", buf, pos)
            pos += 9
            payload = buf[pos : pos + size]
            if len(payload) != size:
                raise CacheFormatError(f"truncated section {name!r}")
            pos += size
            if kind == _ARRAY:
                out[name] = np.frombuffer(payload, dtype="<i8").astype(np.int64)
            elif kind == _STRINGS:
                text = payload.decode("utf-8", "surrogateescape")
                out[name] = text.split("\n") if text else []
            elif kind == _JSON:
                out[name] = json.loads(payload)
            else:
                raise CacheFormatError(f"unknown section kind {kind}")
    except struct.error as exc:
        raise CacheFormatError("truncated cache") from exc
    return out


def read_cache(path: str | os.PathLike) -> tuple[Corpus, IngestReport]:
    with open(path, "rb") as fh:
        s = _read_sections(fh.read())
    try:
        papers = Interner(EntityKind.PAPER, s["papers"])
        authors = Interner(EntityKind.AUTHOR, s["authors"])
        venues = Interner(EntityKind.VENUE, s["venues"])
        insts = Interner(EntityKind.INSTITUTION, s["institutions"])
        meta = PaperMeta(s["year"], s["venue"])
        graph = CitationGraph(CSR(s["fwd_indptr"], s["fwd_indices"]),
                              CSR(s["rev_indptr"], s["rev_indices"]))
        triples = np.stack([s["aff_papers"], s["aff_authors"], s["aff_institutions"]], axis=1)
        report = IngestReport.from_dict(s["report"])
    except KeyError as exc:
        raise CacheFormatError(f"missing section {exc}") from exc
    affils = build_indices(triples, len(papers), len(authors), len(insts))
    return Corpus(papers, authors, venues, insts, meta, graph, affils), report
