import filecmp
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from staticrank.cli import main
from staticrank.combine import RankedList, WeightVector, rank
from staticrank.evaluate import JudgementSet, pairwise_agreement
from staticrank.graph import CitationGraph
from staticrank.pagerank import explicit_dummy_oracle

from helpers import (
    RawCorpus,
    naive_author,
    naive_institution,
    naive_pub,
    naive_venue,
)

HERE = os.path.dirname(__file__)
CORPUS = os.path.join(HERE, "data", "corpus1k")


def corpus_args(root=CORPUS):
    return ["--papers", os.path.join(root, "papers.tsv"),
            "--references", os.path.join(root, "references.tsv"),
            "--affiliations", os.path.join(root, "affiliations.tsv")]


@pytest.fixture
def tiny(tmp_path):
    (tmp_path / "papers.tsv").write_text("a\t2010\tv\nb\t2012\tv\nc\t2014\t\n")
    (tmp_path / "references.tsv").write_text("b\ta\nc\ta\nc\tb\n")
    (tmp_path / "affiliations.tsv").write_text("a\tx\ti\nb\tx\t\nc\ty\ti\n")
    return tmp_path


def test_ingest_tiny(tiny, capsys):
    assert main(["ingest"] + corpus_args(tiny)) == 0
    out = capsys.readouterr().out
    assert "papers: rows_read=3 accepted=3 rejected=0" in out
    assert "references: rows_read=3" in out
    assert "affiliations: rows_read=3" in out


def test_ingest_missing_file(tmp_path, capsys):
    rc = main(["ingest"] + corpus_args(tmp_path))
    assert rc == 2
    assert "file not found" in capsys.readouterr().err


def test_ingest_bad_row(tiny, capsys):
    with open(tiny / "papers.tsv", "a") as fh:
        fh.write("d\tnineteen\t\n")
    assert main(["ingest"] + corpus_args(tiny)) == 0
    assert "rejected=1" in capsys.readouterr().out


def test_ingest_duplicate_paper(tiny, capsys):
    with open(tiny / "papers.tsv", "a") as fh:
        fh.write("a\t2011\t\n")
    assert main(["ingest"] + corpus_args(tiny)) == 2
    assert "duplicate paper id" in capsys.readouterr().err


def test_rank_deterministic(tiny):
    for name in ("r1.tsv", "r2.tsv"):
        assert main(["rank"] + corpus_args(tiny) + ["--out", str(tiny / name),
                                                    "--emit-components"]) == 0
    assert filecmp.cmp(tiny / "r1.tsv", tiny / "r2.tsv", shallow=False)
    assert filecmp.cmp(tiny / "r1.tsv.components.tsv", tiny / "r2.tsv.components.tsv",
                       shallow=False)


def test_rank_projection_matches_pub_order(tmp_path):
    out = tmp_path / "r.tsv"
    assert main(["rank"] + corpus_args() + ["--out", str(out), "--weights", "1,0,0,0,0,0",
                                            "--emit-components"]) == 0
    comps = np.loadtxt(str(out) + ".components.tsv", dtype=str, delimiter="\t")
    expected = rank(list(comps[:, 0]), comps[:, 1].astype(float))
    assert RankedList.read_tsv(out).paper_ids == expected.paper_ids
    lines = out.read_text().splitlines()
    assert [ln.split("\t")[0] for ln in lines] == list(expected.paper_ids)


def test_rank_matches_golden(tmp_path):
    out = tmp_path / "r.tsv"
    assert main(["rank"] + corpus_args() + ["--out", str(out), "--emit-components"]) == 0
    assert filecmp.cmp(out, os.path.join(CORPUS, "golden_ranking.tsv"), shallow=False)
    assert filecmp.cmp(str(out) + ".components.tsv",
                       os.path.join(CORPUS, "golden_components.tsv"), shallow=False)


def _read_raw(root) -> RawCorpus:
    papers, order = {}, []
    with open(os.path.join(root, "papers.tsv")) as fh:
        for line in fh:
            pid, y, v = line.rstrip("\n").split("\t")
            papers[pid] = (int(y) if y else None, v or None)
            order.append(pid)
    with open(os.path.join(root, "references.tsv")) as fh:
        edges = {tuple(line.rstrip("\n").split("\t")) for line in fh}
    edges = {(a, b) for a, b in edges if a != b}
    triples = set()
    with open(os.path.join(root, "affiliations.tsv")) as fh:
        for line in fh:
            p, a, i = line.rstrip("\n").split("\t")
            triples.add((p, a, i or None))
    return RawCorpus(papers, edges, triples, order)


def test_golden_components_hand_checked():
    raw = _read_raw(CORPUS)
    comps = {}
    with open(os.path.join(CORPUS, "golden_components.tsv")) as fh:
        for line in fh:
            cols = line.rstrip("\n").split("\t")
            comps[cols[0]] = [float(x) for x in cols[1:]]
    pub, auth, ven, inst = naive_pub(raw), naive_author(raw), naive_venue(raw), naive_institution(raw)
    for pid, (s_pub, s_age, _, s_auth, s_venue, s_inst) in comps.items():
        assert s_pub == pub[pid]
        assert s_age == (raw.papers[pid][0] or 0)
        assert math.isclose(s_auth, auth[pid], rel_tol=1e-12)
        assert s_venue == ven[pid]
        assert math.isclose(s_inst, inst[pid], rel_tol=1e-12)

    index = {pid: k for k, pid in enumerate(raw.order)}
    g = CitationGraph.from_edges([index[a] for a, _ in raw.edges],
                                 [index[b] for _, b in raw.edges], len(raw.order))
    pr = explicit_dummy_oracle(g).scores
    for pid, row in comps.items():
        assert abs(row[2] - pr[index[pid]]) < 1e-10

    golden = RankedList.read_tsv(os.path.join(CORPUS, "golden_ranking.tsv"))
    w = WeightVector()
    for pid, score in golden.score_map().items():
        assert score == math.fsum(wk * sk for wk, sk in zip(w, comps[pid]))


def test_cache_round_trip_via_cli(tmp_path, capsys):
    cache = tmp_path / "corpus.srnk"
    assert main(["ingest"] + corpus_args() + ["--cache", str(cache)]) == 0
    assert cache.read_bytes()[:4] == b"SRNK"
    out = tmp_path / "r.tsv"
    assert main(["rank", "--cache", str(cache), "--out", str(out)]) == 0
    assert filecmp.cmp(out, os.path.join(CORPUS, "golden_ranking.tsv"), shallow=False)


def test_rank_empty_corpus(tmp_path):
    for name in ("papers.tsv", "references.tsv", "affiliations.tsv"):
        (tmp_path / name).write_text("")
    assert main(["rank"] + corpus_args(tmp_path) + ["--out", str(tmp_path / "r.tsv")]) != 0


def test_run_header_and_manifest(tiny, capsys):
    manifest = tiny / "run.txt"
    assert main(["rank"] + corpus_args(tiny) + ["--out", str(tiny / "r.tsv"), "--threshold", "7",
                                                "--manifest", str(manifest)]) == 0
    err = capsys.readouterr().err
    for key in ("threshold=7", "alpha=0.1", "current_year=2014", "damping=0.85",
                "weights=2.5,0.1,1.0,1.0,0.1,0.01", "round=2", "normalization=none"):
        assert f"# {key}" in err
    assert manifest.read_text() in err


def test_config_file_overridden_by_flags(tiny, capsys):
    cfg = tiny / "run.cfg"
    cfg.write_text("# defaults\nthreshold = 3\n--alpha=0.5\nround=1\n")
    assert main(["rank"] + corpus_args(tiny) + ["--out", str(tiny / "r.tsv"),
                                                "--config", str(cfg), "--threshold", "9"]) == 0
    err = capsys.readouterr().err
    assert "# threshold=9" in err and "# alpha=0.5" in err and "# round=1" in err


def test_bad_config_value(tiny, capsys):
    cfg = tiny / "run.cfg"
    cfg.write_text("threshold=0\n")
    rc = main(["rank"] + corpus_args(tiny) + ["--out", str(tiny / "r.tsv"), "--config", str(cfg)])
    assert rc == 2


def test_usage_errors(tiny):
    with pytest.raises(SystemExit) as exc:
        main(["rank", "--round", "3"])
    assert exc.value.code == 2
    assert main(["rank"] + corpus_args(tiny)) == 2  # no --out
    assert main(["rank"] + corpus_args(tiny) + ["--out", str(tiny / "r"), "--weights", "1,2"]) == 2


def test_evaluate_consistent(tiny, capsys):
    out = tiny / "r.tsv"
    assert main(["rank"] + corpus_args(tiny) + ["--out", str(out)]) == 0
    ranking = RankedList.read_tsv(out)
    ids = ranking.paper_ids
    (tiny / "j.tsv").write_text(f"{ids[0]}\t{ids[1]}\n{ids[1]}\t{ids[2]}\n")
    capsys.readouterr()
    assert main(["evaluate", "--ranking", str(out), "--judgements", str(tiny / "j.tsv")]) == 0
    assert "agreement\t1.000000" in capsys.readouterr().out


def test_evaluate_unknown_only(tiny, capsys):
    out = tiny / "r.tsv"
    main(["rank"] + corpus_args(tiny) + ["--out", str(out)])
    (tiny / "j.tsv").write_text("zz\tyy\n")
    assert main(["evaluate", "--ranking", str(out), "--judgements", str(tiny / "j.tsv")]) != 0


def test_evaluate_mixed_matches_library(tmp_path, capsys):
    golden = os.path.join(CORPUS, "golden_ranking.tsv")
    ranking = RankedList.read_tsv(golden)
    rng = np.random.default_rng(5)
    ids = list(ranking.paper_ids)
    rows = []
    for _ in range(300):
        a, b = rng.choice(len(ids), 2, replace=False)
        rows.append(f"{ids[a]}\t{ids[b]}")
    rows.append("ghost\tP00000001")
    j = tmp_path / "j.tsv"
    j.write_text("\n".join(rows) + "\n")
    pairs_out = tmp_path / "pairs.tsv"
    for policy in ("zero", "half"):
        capsys.readouterr()
        assert main(["evaluate", "--ranking", golden, "--judgements", str(j),
                     "--tie-policy", policy, "--pairs-out", str(pairs_out)]) == 0
        text = capsys.readouterr().out
        from staticrank.evaluate import TiePolicy
        expected = pairwise_agreement(ranking, JudgementSet.read_tsv(j), TiePolicy(policy))
        assert f"agreement\t{expected:.6f}" in text
        assert "unresolvable\t1" in text
    assert len(pairs_out.read_text().splitlines()) == 301


def test_search_subcommand(tmp_path, capsys):
    golden = RankedList.read_tsv(os.path.join(CORPUS, "golden_ranking.tsv"))
    ids = golden.paper_ids
    j = tmp_path / "j.tsv"
    j.write_text("".join(f"{ids[k]}\t{ids[k + 5]}\n" for k in range(0, 200, 3)))
    assert main(["search"] + corpus_args() + ["--judgements", str(j),
                                              "--grid", "0,2.5;0.1;0,1;1;0.1;0.01"]) == 0
    out = capsys.readouterr().out
    assert "weights\t" in out and "agreement\t" in out


def test_generate_and_figures(tmp_path):
    assert main(["generate", str(tmp_path / "c"), "--papers", "200", "--edges", "800",
                 "--triples", "400", "--seed", "3"]) == 0
    figs = tmp_path / "figs"
    assert main(["rank"] + corpus_args(tmp_path / "c") + ["--out", str(tmp_path / "r.tsv"),
                                                          "--figures", str(figs)]) == 0
    pngs = sorted(os.listdir(figs))
    assert pngs == ["component_correlations.png", "component_histograms.png",
                    "score_by_rank.png"]
    for p in pngs:
        assert (figs / p).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_module_entry_point(tiny):
    proc = subprocess.run([sys.executable, "-m", "staticrank.cli", "ingest"] + corpus_args(tiny),
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "papers=3 edges=3" in proc.stdout
