"""Stochastic normalisation and tie-aware page ordering."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

DEFAULT_TIE_TOL = 1e-9


def _natural_key(label: str):
    # "2" < "10"; mixed labels compare chunk by chunk
    return [(0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.split(r"(\d+)", label) if t]


def _all_exact(v) -> bool:
    return not isinstance(v, np.ndarray) and all(isinstance(x, (int, Fraction)) for x in v)


def normalize_stochastic(v):
    """Scale a nonnegative vector to unit sum.

    Ints/Fractions stay exact (list of Fractions); anything else becomes a
    float array.
    """
    if _all_exact(v):
        v = [Fraction(x) for x in v]
        if any(x < 0 for x in v):
            raise ValueError("negative entry in vector to normalize")
        total = sum(v, Fraction(0))
        if total == 0:
            raise ValueError("cannot normalize the zero vector")
        return [x / total for x in v]
    arr = np.asarray(v, dtype=float)
    if np.any(arr < 0):
        raise ValueError("negative entry in vector to normalize")
    total = arr.sum()
    if total <= 0:
        raise ValueError("cannot normalize the zero vector")
    return arr / total


@dataclass
class RankTable:
    """Scores per page plus rank groups in descending score order."""

    labels: tuple[str, ...]
    scores: list
    groups: list[tuple[str, ...]]
    trace: Any = field(default=None, repr=False, compare=False)

    @property
    def exact(self) -> bool:
        return _all_exact(self.scores)

    def score_of(self, label: str):
        return self.scores[self.labels.index(label)]

    def ordering(self) -> str:
        parts = []
        for g in self.groups:
            parts.append(g[0] if len(g) == 1 else "{" + ", ".join(g) + "}")
        return " > ".join(parts)

    def rows(self):
        """``(rank, label, score)`` with one shared rank number per group."""
        for rank, group in enumerate(self.groups, start=1):
            for label in group:
                yield rank, label, self.score_of(label)

    def to_tsv(self) -> str:
        lines = ["rank\tlabel\tscore"]
        for rank, label, score in self.rows():
            lines.append(f"{rank}\t{label}\t{float(score)!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        d = {
            "scores": {lab: float(s) for lab, s in zip(self.labels, self.scores)},
            "groups": [list(g) for g in self.groups],
            "ordering": self.ordering(),
        }
        if self.exact:
            d["exact_scores"] = {lab: f"{s.numerator}/{s.denominator}"
                                 for lab, s in zip(self.labels, self.scores)}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def rank_pages(scores: Sequence, labels=None, tie_tol: float = DEFAULT_TIE_TOL) -> RankTable:
    """Group pages by score, highest first.

    Exact (Fraction) scores tie only when equal. Float scores are sorted and
    chained: a page joins the current group when it is within ``tie_tol`` of
    the previous page in sorted order. Chaining is not transitive, so a long
    run of near-equal floats can merge pages further apart than ``tie_tol``.
    """
    exact = _all_exact(scores)
    vals = [Fraction(s) for s in scores] if exact else [float(s) for s in scores]
    if labels is None:
        labels = [str(i + 1) for i in range(len(vals))]
    labels = tuple(labels)

    order = sorted(range(len(vals)), key=lambda i: (-vals[i], _natural_key(labels[i])))
    groups: list[list[int]] = []
    for i in order:
        if groups:
            prev = groups[-1][-1]
            tied = vals[i] == vals[prev] if exact else abs(vals[prev] - vals[i]) <= tie_tol
            if tied:
                groups[-1].append(i)
                continue
        groups.append([i])

    out_groups = [tuple(sorted((labels[i] for i in g), key=_natural_key)) for g in groups]
    return RankTable(labels=labels, scores=list(vals), groups=out_groups)
