"""Agreement of a ranking with pairwise human judgements, and a weight grid search.

A judgement ``(better, worse)`` is satisfied when the ranking scores
``better`` strictly above ``worse``. Pairs naming a paper the ranking does not
contain are unresolvable and left out of the denominator.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .combine import ComponentScores, Normalization, RankedList, WeightVector, combine
from .graph import COMPONENTS

DEFAULT_GRID_CAP = 10**6


class TiePolicy(enum.Enum):
    COUNT_ZERO = "zero"
    COUNT_HALF = "half"


class NoEvaluablePairs(ValueError):
    pass


@dataclass(frozen=True)
class JudgementSet:
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        for better, worse in self.pairs:
            if better == worse:
                raise ValueError(f"judgement compares {better!r} with itself")

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, str]]) -> "JudgementSet":
        return cls(tuple((str(b), str(w)) for b, w in pairs))

    def reversed(self) -> "JudgementSet":
        return JudgementSet(tuple((w, b) for b, w in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    @classmethod
    def read_tsv(cls, path: str | os.PathLike) -> "JudgementSet":
        pairs = []
        with open(path, "r", encoding="utf-8", errors="surrogateescape", newline="\n") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\r\n")
                if not line:
                    continue
                cols = line.split("\t")
                if len(cols) != 2 or not cols[0] or not cols[1]:
                    raise ValueError(f"{path}:{lineno}: expected 'better<TAB>worse'")
                if cols[0] == cols[1]:
                    raise ValueError(f"{path}:{lineno}: paper judged against itself")
                pairs.append((cols[0], cols[1]))
        return cls(tuple(pairs))


class Outcome(enum.Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    TIE = "tie"
    UNRESOLVABLE = "unresolvable"


@dataclass(frozen=True)
class AgreementReport:
    agreement: float
    agreed: int
    disagreed: int
    tied: int
    unresolvable: int
    tie_policy: TiePolicy
    outcomes: tuple[Outcome, ...]

    @property
    def resolvable(self) -> int:
        return self.agreed + self.disagreed + self.tied

    def format(self) -> str:
        return (
            f"agreement\t{self.agreement:.6f}\n"
            f"resolvable\t{self.resolvable}\n"
            f"unresolvable\t{self.unresolvable}\n"
            f"agreed\t{self.agreed}\n"
            f"disagreed\t{self.disagreed}\n"
            f"tied\t{self.tied}\n"
            f"tie_policy\t{self.tie_policy.value}\n"
        )

    def write_pairs_tsv(self, judgements: JudgementSet, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", errors="surrogateescape", newline="\n") as fh:
            for (better, worse), outcome in zip(judgements.pairs, self.outcomes):
                fh.write(f"{better}\t{worse}\t{outcome.value}\n")


def agreement_report(ranking: RankedList | dict[str, float], judgements: JudgementSet,
                     tie_policy: TiePolicy = TiePolicy.COUNT_ZERO) -> AgreementReport:
    score = ranking.score_map() if isinstance(ranking, RankedList) else ranking
    outcomes = []
    for better, worse in judgements.pairs:
        sb, sw = score.get(better), score.get(worse)
        if sb is None or sw is None:
            outcomes.append(Outcome.UNRESOLVABLE)
        elif sb > sw:
            outcomes.append(Outcome.AGREE)
        elif sb < sw:
            outcomes.append(Outcome.DISAGREE)
        else:
            outcomes.append(Outcome.TIE)
    agreed = outcomes.count(Outcome.AGREE)
    tied = outcomes.count(Outcome.TIE)
    disagreed = outcomes.count(Outcome.DISAGREE)
    resolvable = agreed + tied + disagreed
    if resolvable == 0:
        raise NoEvaluablePairs("no evaluable pairs")
    credit = agreed + (0.5 * tied if tie_policy is TiePolicy.COUNT_HALF else 0.0)
    return AgreementReport(
        agreement=credit / resolvable,
        agreed=agreed,
        disagreed=disagreed,
        tied=tied,
        unresolvable=outcomes.count(Outcome.UNRESOLVABLE),
        tie_policy=tie_policy,
        outcomes=tuple(outcomes),
    )


def pairwise_agreement(ranking: RankedList | dict[str, float], judgements: JudgementSet,
                       tie_policy: TiePolicy = TiePolicy.COUNT_ZERO) -> float:
    """Fraction of resolvable judged pairs the ranking orders the same way."""
    return agreement_report(ranking, judgements, tie_policy).agreement


def _pair_indices(paper_ids: Sequence[str], judgements: JudgementSet):
    index = {pid: i for i, pid in enumerate(paper_ids)}
    better, worse = [], []
    for b, w in judgements.pairs:
        if b in index and w in index:
            better.append(index[b])
            worse.append(index[w])
    if not better:
        raise NoEvaluablePairs("no evaluable pairs")
    return np.array(better, dtype=np.int64), np.array(worse, dtype=np.int64)


def grid_search_weights(
    scores: ComponentScores,
    judgements: JudgementSet,
    grid: Sequence[Sequence[float]],
    tie_policy: TiePolicy = TiePolicy.COUNT_ZERO,
    normalization: Normalization = Normalization.NONE,
    max_points: int = DEFAULT_GRID_CAP,
) -> tuple[WeightVector, float]:
    """Exhaustively try every weight vector in the cartesian product ``grid``.

    Returns the best vector and its agreement; among equally good vectors the
    lexicographically smallest wins.
    """
    if len(grid) != len(COMPONENTS):
        raise ValueError(f"grid needs one value list per component ({len(COMPONENTS)})")
    axes = [sorted(set(float(v) for v in axis)) for axis in grid]
    if any(not axis for axis in axes):
        raise ValueError("grid has an empty axis")
    size = math.prod(len(axis) for axis in axes)
    if size > max_points:
        raise ValueError(f"grid has {size} points, cap is {max_points}")

    better, worse = _pair_indices(scores.paper_ids, judgements)
    best_w, best_a = None, -1.0
    # product over ascending axes visits points in lexicographic order
    for point in itertools.product(*axes):
        w = WeightVector.checked(*point)
        combined = combine(scores, w, normalization)
        sb, sw = combined[better], combined[worse]
        credit = np.count_nonzero(sb > sw)
        if tie_policy is TiePolicy.COUNT_HALF:
            credit += 0.5 * np.count_nonzero(sb == sw)
        a = credit / len(better)
        if a > best_a:
            best_w, best_a = w, a
    return best_w, float(best_a)
