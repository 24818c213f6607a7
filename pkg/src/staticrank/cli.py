"""Command-line entry point: ``staticrank {ingest,rank,evaluate,search,generate}``.

Exit codes: 0 success, 1 runtime failure, 2 usage or input error.

Every option can also come from a ``--config`` file of ``key=value`` lines
(keys are option names with or without the leading dashes, ``-`` and ``_``
interchangeable); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .cache import CacheFormatError, read_cache, write_cache
from .combine import (
    ComponentScores,
    Normalization,
    RankedList,
    WeightVector,
    combine,
    compute_component_scores,
    rank,
)
from .evaluate import JudgementSet, NoEvaluablePairs, TiePolicy, agreement_report, grid_search_weights
from .graph import COMPONENTS
from .ingest import IngestError, load_corpus
from .pagerank import PageRankConfig
from .scores import Aggregation, AuthorBase, Round, ScoringConfig, VenueVariant
from .synthetic import SyntheticSpec, generate_corpus

log = logging.getLogger("staticrank")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _components(text: str) -> tuple[str, ...]:
    names = tuple(n.strip() for n in text.split(",") if n.strip())
    unknown = [n for n in names if n not in COMPONENTS]
    if unknown:
        raise ValueError(f"unknown component(s) {unknown}; choose from {COMPONENTS}")
    return names


def _current_year(text: str) -> int | None:
    return None if text in ("", "auto") else int(text)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# dest -> (converter, default)
OPTIONS = {
    "papers": (str, None),
    "references": (str, None),
    "affiliations": (str, None),
    "out": (str, None),
    "cache": (str, None),
    "manifest": (str, None),
    "figures": (str, None),
    "emit_components": (_bool, False),
    "weights": (WeightVector.parse, WeightVector()),
    "threshold": (int, 5000),
    "alpha": (float, 0.1),
    "current_year": (_current_year, None),
    "round": (lambda s: Round(int(s)), Round.ROUND2),
    "author_aggregation": (Aggregation, Aggregation.MEAN),
    "author_base": (AuthorBase, AuthorBase.MEAN_CITATIONS_PER_PAPER),
    "venue_variant": (VenueVariant, VenueVariant.TOTAL_CITATIONS),
    "damping": (float, 0.85),
    "pr_tolerance": (float, 1e-9),
    "pr_max_iters": (int, 200),
    "normalization": (Normalization, Normalization.NONE),
    "components": (_components, COMPONENTS),
    "tie_policy": (TiePolicy, TiePolicy.COUNT_ZERO),
    "threads": (int, 0),
    "ranking": (str, None),
    "judgements": (str, None),
    "pairs_out": (str, None),
    "grid": (str, None),
}


@dataclass
class RunConfig:
    """Effective parameters of one run, after config file and flags are merged."""

    command: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None

    def scoring(self) -> ScoringConfig:
        return ScoringConfig(
            threshold=self.threshold,
            alpha=self.alpha,
            current_year=self.current_year,
            round=self.round,
            author_aggregation=self.author_aggregation,
            author_base=self.author_base,
            venue_variant=self.venue_variant,
        )

    def pagerank(self) -> PageRankConfig:
        return PageRankConfig(
            damping=self.damping, tolerance=self.pr_tolerance, max_iterations=self.pr_max_iters
        )

    def header(self) -> str:
        lines = [f"# staticrank {__version__} {self.command}"]
        for key in sorted(self.values):
            lines.append(f"# {key}={_show(self.values[key])}")
        return "\n".join(lines) + "\n"


def _show(value) -> str:
    if isinstance(value, WeightVector):
        return value.format()
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, tuple):
        return ",".join(map(str, value))
    return "none" if value is None else str(value)


def read_config_file(path: str) -> dict:
    if not os.path.isfile(path):
        raise UsageError(f"file not found: {path}")
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in OPTIONS:
                raise UsageError(f"{path}:{lineno}: unknown option {key!r}")
            out[key] = value
    return out


def _add_corpus_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--papers", help="papers.tsv")
    p.add_argument("--references", help="references.tsv")
    p.add_argument("--affiliations", help="affiliations.tsv")
    p.add_argument("--cache", help="binary corpus cache (SRNK format)")


def _add_scoring_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weights", help="six comma-separated weights (default 2.5,0.1,1,1,0.1,0.01)")
    p.add_argument("--threshold", help="citation cap t (default 5000)")
    p.add_argument("--alpha", help="citation decay rate (default 0.1)")
    p.add_argument("--current-year", help="reference year, or 'auto' for the latest in the corpus")
    p.add_argument("--round", choices=["1", "2"], help="publication score variant (default 2)")
    p.add_argument("--author-aggregation", choices=[a.value for a in Aggregation])
    p.add_argument("--author-base", choices=[a.value for a in AuthorBase])
    p.add_argument("--venue-variant", choices=[v.value for v in VenueVariant])
    p.add_argument("--damping", help="PageRank damping (default 0.85)")
    p.add_argument("--pr-tolerance", help="PageRank L1 stopping tolerance (default 1e-9)")
    p.add_argument("--pr-max-iters", help="PageRank iteration cap (default 200)")
    p.add_argument("--normalization", choices=[n.value for n in Normalization])
    p.add_argument("--components", help="comma-separated components to compute (default all)")
    p.add_argument("--threads", help="worker threads, 0 = auto (computation is sequential)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="staticrank", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value file of defaults")
        p.add_argument("--manifest", help="also write the run header to this file")

    p = sub.add_parser("ingest", help="parse the corpus, print the ingest report")
    common(p)
    _add_corpus_options(p)

    p = sub.add_parser("rank", help="score and rank every paper")
    common(p)
    _add_corpus_options(p)
    _add_scoring_options(p)
    p.add_argument("--out", help="ranking output (paper_id TAB score)")
    p.add_argument("--emit-components", action="store_const", const="true",
                   help="also write <out>.components.tsv")
    p.add_argument("--figures", help="directory for diagnostic PNG figures")

    p = sub.add_parser("evaluate", help="agreement of a ranking with pairwise judgements")
    common(p)
    p.add_argument("--ranking", help="ranking file written by 'rank'")
    p.add_argument("--judgements", help="better_id TAB worse_id per line")
    p.add_argument("--tie-policy", choices=[t.value for t in TiePolicy])
    p.add_argument("--pairs-out", help="write per-pair outcomes TSV here")

    p = sub.add_parser("search", help="grid search of weights against judgements")
    common(p)
    _add_corpus_options(p)
    _add_scoring_options(p)
    p.add_argument("--judgements")
    p.add_argument("--tie-policy", choices=[t.value for t in TiePolicy])
    p.add_argument("--grid", help="six ';'-separated comma lists, e.g. '0,2.5;0.1;1;1;0,0.1;0.01'")

    p = sub.add_parser("generate", help="write a seeded synthetic corpus")
    p.add_argument("out_dir")
    p.add_argument("--papers", type=int, default=1000, dest="n_papers")
    p.add_argument("--edges", type=int, default=5000, dest="n_edges")
    p.add_argument("--triples", type=int, default=3000, dest="n_triples")
    p.add_argument("--corrupt-fraction", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults < config file < command-line flags and convert types."""
    raw = {}
    if getattr(args, "config", None):
        raw.update(read_config_file(args.config))
    for key, value in vars(args).items():
        if key in OPTIONS and value is not None:
            raw[key] = value
    values = {}
    present = set(vars(args))
    for key, (convert, default) in OPTIONS.items():
        if key not in present:
            continue
        if key in raw:
            try:
                values[key] = convert(raw[key]) if isinstance(raw[key], str) else raw[key]
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {exc}") from exc
        else:
            values[key] = default
    cfg = RunConfig(args.command, values)
    try:
        if "threshold" in values:
            cfg.scoring()
            cfg.pagerank()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return cfg


def _emit_header(cfg: RunConfig) -> None:
    text = cfg.header()
    sys.stderr.write(text)
    if cfg.values.get("manifest"):
        with open(cfg.manifest, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(cfg: RunConfig, allow_cache_only: bool = True):
    paths = (cfg.papers, cfg.references, cfg.affiliations)
    if all(p is None for p in paths):
        if allow_cache_only and cfg.cache:
            if not os.path.isfile(cfg.cache):
                raise UsageError(f"file not found: {cfg.cache}")
            return read_cache(cfg.cache)
        raise UsageError("need --papers, --references and --affiliations (or --cache)")
    if any(p is None for p in paths):
        raise UsageError("--papers, --references and --affiliations go together")
    for p in paths:
        if not os.path.isfile(p):
            raise UsageError(f"file not found: {p}")
    corpus, report = load_corpus(*paths)
    if cfg.cache:
        write_cache(cfg.cache, corpus, report)
    return corpus, report


def cmd_ingest(cfg: RunConfig) -> int:
    _emit_header(cfg)
    corpus, report = _load(cfg, allow_cache_only=False)
    print(report.format())
    print(f"papers={corpus.num_papers} edges={corpus.graph.num_edges} "
          f"triples={corpus.affiliations.num_triples} authors={len(corpus.authors)} "
          f"venues={len(corpus.venues)} institutions={len(corpus.institutions)}")
    return EXIT_OK


def _scores(cfg: RunConfig):
    corpus, report = _load(cfg)
    if corpus.num_papers == 0:
        raise UsageError("empty corpus: no papers ingested")
    cfg.values["current_year"] = cfg.scoring().resolved(corpus.meta).current_year
    _emit_header(cfg)
    t0 = time.perf_counter()
    scores = compute_component_scores(corpus, cfg.scoring(), cfg.pagerank(), cfg.components)
    log.info("component scores in %.2fs", time.perf_counter() - t0)
    return corpus, scores


def cmd_rank(cfg: RunConfig) -> int:
    if not cfg.out:
        raise UsageError("--out is required")
    corpus, scores = _scores(cfg)
    combined = combine(scores, cfg.weights, cfg.normalization)
    ranking = rank(scores.paper_ids, combined)
    ranking.write_tsv(cfg.out)
    if cfg.emit_components:
        scores.write_tsv(cfg.out + ".components.tsv")
    if cfg.figures:
        from .plots import render_rank_figures

        for path in render_rank_figures(scores, ranking, cfg.figures):
            log.info("wrote %s", path)
    print(f"ranked {len(ranking)} papers -> {cfg.out}")
    return EXIT_OK


def cmd_evaluate(cfg: RunConfig) -> int:
    if not cfg.ranking or not cfg.judgements:
        raise UsageError("--ranking and --judgements are required")
    for p in (cfg.ranking, cfg.judgements):
        if not os.path.isfile(p):
            raise UsageError(f"file not found: {p}")
    _emit_header(cfg)
    ranking = RankedList.read_tsv(cfg.ranking)
    judgements = JudgementSet.read_tsv(cfg.judgements)
    report = agreement_report(ranking, judgements, cfg.tie_policy)
    sys.stdout.write(report.format())
    if cfg.pairs_out:
        report.write_pairs_tsv(judgements, cfg.pairs_out)
    return EXIT_OK


def parse_grid(text: str) -> list[list[float]]:
    axes = [a for a in text.split(";")]
    if len(axes) != len(COMPONENTS):
        raise ValueError(f"grid needs {len(COMPONENTS)} ';'-separated lists")
    return [[float(v) for v in axis.split(",") if v.strip()] for axis in axes]


def cmd_search(cfg: RunConfig) -> int:
    if not cfg.judgements or not cfg.grid:
        raise UsageError("--judgements and --grid are required")
    if not os.path.isfile(cfg.judgements):
        raise UsageError(f"file not found: {cfg.judgements}")
    try:
        grid = parse_grid(cfg.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _, scores = _scores(cfg)
    judgements = JudgementSet.read_tsv(cfg.judgements)
    weights, agreement = grid_search_weights(
        scores, judgements, grid, cfg.tie_policy, cfg.normalization
    )
    print(f"weights\t{weights.format()}\nagreement\t{agreement:.6f}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(n_papers=args.n_papers, n_edges=args.n_edges, n_triples=args.n_triples,
                         corrupt_fraction=args.corrupt_fraction, seed=args.seed)
    planted = generate_corpus(args.out_dir, spec)
    for name, count in planted.items():
        print(f"{name}\tplanted_malformed={count}")
    return EXIT_OK


COMMANDS = {"ingest": cmd_ingest, "rank": cmd_rank, "evaluate": cmd_evaluate,
            "search": cmd_search}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "generate":
            return cmd_generate(args)
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, IngestError, CacheFormatError, NoEvaluablePairs) as exc:
        print(f"staticrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"staticrank: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
