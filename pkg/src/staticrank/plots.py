"""Diagnostic figures written next to the ranking output."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .combine import ComponentScores, RankedList  # noqa: E402
from .graph import COMPONENTS  # noqa: E402

DPI = 120


def component_histograms(scores: ComponentScores, path: str | os.PathLike) -> str:
    """One histogram per component; the scales differ by orders of magnitude."""
    fig, axes = plt.subplots(2, 3, figsize=(12, 6.5))
    for ax, name in zip(axes.flat, COMPONENTS):
        col = scores.column(name)
        ax.hist(col, bins=50, color="0.35")
        ax.set_yscale("log")
        ax.set_title(f"{name}  [{col.min():.3g}, {col.max():.3g}]", fontsize=10)
        ax.tick_params(labelsize=8)
    fig.suptitle(f"Component score distributions ({len(scores)} papers)")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def score_by_rank(ranking: RankedList, path: str | os.PathLike) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ranks = np.arange(1, len(ranking) + 1)
    ax.plot(ranks, ranking.scores, lw=1.2, color="k")
    ax.set_xscale("log")
    ax.set_xlabel("rank")
    ax.set_ylabel("combined score")
    ax.grid(True, which="both", lw=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def component_correlations(scores: ComponentScores, path: str | os.PathLike) -> str:
    """Spearman correlation heatmap between component orderings."""
    from scipy.stats import spearmanr

    values = scores.values
    varying = values.std(axis=0) > 0
    rho = np.full((len(COMPONENTS), len(COMPONENTS)), np.nan)
    if varying.sum() >= 2:
        r = spearmanr(values[:, varying]).statistic
        r = np.atleast_2d(r)
        idx = np.flatnonzero(varying)
        rho[np.ix_(idx, idx)] = r
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(rho, vmin=-1, vmax=1, cmap="RdBu_r")
    ax.set_xticks(range(len(COMPONENTS)), COMPONENTS, rotation=45, fontsize=8)
    ax.set_yticks(range(len(COMPONENTS)), COMPONENTS, fontsize=8)
    for i in range(len(COMPONENTS)):
        for j in range(len(COMPONENTS)):
            if np.isfinite(rho[i, j]):
                ax.text(j, i, f"{rho[i, j]:.2f}", ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def render_rank_figures(scores: ComponentScores, ranking: RankedList,
                        out_dir: str | os.PathLike) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    return [
        component_histograms(scores, os.path.join(out_dir, "component_histograms.png")),
        score_by_rank(ranking, os.path.join(out_dir, "score_by_rank.png")),
        component_correlations(scores, os.path.join(out_dir, "component_correlations.png")),
    ]
