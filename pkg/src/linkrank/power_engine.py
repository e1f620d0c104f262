"""Power iteration with full telemetry.

Runs ``I_n = H I_{n-1}`` and classifies each run as converged, oscillating
with period 2, or exhausted. Distances are L1 throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, LinkRankError, NonConvergenceError
from .stochastic_matrix import ColumnStochasticMatrix, matvec

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 10000
# above this many pages only residuals are kept unless asked otherwise
FULL_HISTORY_MAX_PAGES = 256


@dataclass(frozen=True)
class InitialVector:
    kind: str = "uniform"
    vector: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("e1", "uniform", "custom"):
            raise ValueError(f"unknown initial vector kind {self.kind!r}")
        if (self.kind == "custom") != (self.vector is not None):
            raise ValueError("a vector is required for (and only for) kind 'custom'")

    @classmethod
    def e1(cls):
        return cls("e1")

    @classmethod
    def uniform(cls):
        return cls("uniform")

    @classmethod
    def custom(cls, vector: Sequence[float]):
        return cls("custom", tuple(float(x) for x in vector))

    @property
    def label(self) -> str:
        return self.kind

    def resolve(self, n: int) -> np.ndarray:
        if self.kind == "e1":
            v = np.zeros(n)
            v[0] = 1.0
            return v
        if self.kind == "uniform":
            return np.full(n, 1.0 / n)
        v = np.asarray(self.vector, dtype=float)
        if len(v) != n:
            raise DimensionError(f"initial vector of length {len(v)} for {n} pages")
        if np.any(v < 0) or abs(v.sum() - 1.0) > 1e-12:
            raise LinkRankError("custom initial vector must be stochastic")
        return v


def as_initial_vector(init) -> InitialVector:
    if isinstance(init, InitialVector):
        return init
    if isinstance(init, str):
        return InitialVector(init)
    return InitialVector.custom(init)


class VerdictKind(enum.Enum):
    CONVERGED = "converged"
    OSCILLATING = "oscillating"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    step: int
    note: str = ""

    def __str__(self):
        if self.kind is VerdictKind.OSCILLATING:
            return f"oscillating (period 2) detected at step {self.step}"
        if self.kind is VerdictKind.EXHAUSTED:
            return f"exhausted after {self.step} steps" + (f"; {self.note}" if self.note else "")
        return f"converged at step {self.step}"


@dataclass
class IterationTrace:
    """History of one power run.

    ``residuals[k]`` is ``||I_{k+1} - I_k||_1``. Retained iterates are
    ``iterates[k] == I_{steps[k]}``; with full retention ``steps == range(len)``.
    """

    residuals: list[float]
    iterates: list[np.ndarray]
    steps: list[int]
    verdict: Verdict
    tol: float
    max_iters: int
    init: InitialVector
    final: np.ndarray = field(repr=False, default=None)

    @property
    def n_steps(self) -> int:
        return len(self.residuals)

    @property
    def converged(self) -> bool:
        return self.verdict.kind is VerdictKind.CONVERGED

    def iterate(self, n: int) -> np.ndarray:
        try:
            return self.iterates[self.steps.index(n)]
        except ValueError:
            raise KeyError(f"iterate {n} was not retained") from None

    def to_tsv(self, include_iterates: bool = False, labels=None) -> str:
        """Columns ``n, residual`` (blank at n=0), plus one column per page if asked."""
        header = ["n", "residual"]
        if include_iterates:
            n_pages = len(self.final)
            labels = labels or [str(i + 1) for i in range(n_pages)]
            header += [f"page_{lab}" for lab in labels]
        lines = ["\t".join(header)]
        rows = self.steps if include_iterates else range(self.n_steps + 1)
        for k, n in enumerate(rows):
            res = "" if n == 0 else repr(self.residuals[n - 1])
            cells = [str(n), res]
            if include_iterates:
                cells += [repr(float(x)) for x in self.iterates[k]]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


def l1(a, b) -> float:
    return float(np.abs(np.asarray(a) - np.asarray(b)).sum())


def detect_period2(recent: Sequence[np.ndarray], tol: float) -> bool:
    """True iff the last iterate repeats the one two steps back but not the previous one.

    The two-step distance must be within ``tol`` *relative* to the one-step
    distance. An absolute test misfires on converging runs with a negative
    second eigenvalue, whose two-step distance is ``|1 + lambda2|`` times
    the one-step distance and so crosses ``tol`` first.
    """
    if len(recent) < 3:
        raise ValueError("period-2 test needs at least 3 iterates")
    cur, prev, prev2 = recent[-1], recent[-2], recent[-3]
    step = l1(cur, prev)
    return step > tol and l1(cur, prev2) <= tol * min(1.0, step)


def power_iterate(
    M: ColumnStochasticMatrix,
    init=InitialVector(),
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    retain: str = "auto",
    stride: int = 1,
) -> IterationTrace:
    """Run the power method from ``init`` on ``M``.

    Parameters
    ----------
    retain : {"auto", "all", "none"}
        Iterate retention. ``auto`` keeps every ``stride``-th iterate when
        ``M.n < 256`` and none otherwise. The last iterate is always kept
        when anything is.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    init = as_initial_vector(init)
    x = init.resolve(M.n)

    keep = retain == "all" or (retain == "auto" and M.n < FULL_HISTORY_MAX_PAGES)
    iterates, steps = ([x], [0]) if keep else ([], [])
    residuals: list[float] = []
    window = [x]
    verdict = None

    for n in range(1, max_iters + 1):
        y = matvec(M, x)
        residuals.append(l1(y, x))
        window = (window + [y])[-3:]
        if keep and n % stride == 0:
            iterates.append(y)
            steps.append(n)
        x = y
        if residuals[-1] <= tol:
            verdict = Verdict(VerdictKind.CONVERGED, n)
        elif n >= 2 and detect_period2(window, tol):
            verdict = Verdict(VerdictKind.OSCILLATING, n)
        elif n == max_iters:
            verdict = Verdict(
                VerdictKind.EXHAUSTED, n, "no period-2 pattern; longer cycles are not detected"
            )
        if verdict is not None:
            break

    if keep and steps[-1] != len(residuals):
        iterates.append(x)
        steps.append(len(residuals))
    return IterationTrace(
        residuals=residuals,
        iterates=iterates,
        steps=steps,
        verdict=verdict,
        tol=tol,
        max_iters=max_iters,
        init=init,
        final=x,
    )


@dataclass(frozen=True)
class PageRankResult:
    scores: np.ndarray
    trace: IterationTrace
    fixed_point_residual: float


def pagerank_vector(
    M: ColumnStochasticMatrix,
    init=InitialVector(),
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> PageRankResult:
    """Converged PageRank vector with its trace; raises on oscillation or exhaustion."""
    trace = power_iterate(M, init, tol, max_iters, retain="none")
    if not trace.converged:
        raise NonConvergenceError(trace)
    scores = trace.final
    return PageRankResult(scores, trace, l1(matvec(M, scores), scores))


def pagerank(
    M: ColumnStochasticMatrix,
    init=InitialVector(),
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    tie_tol: float = 1e-9,
):
    """PageRank of ``M`` as a tie-aware :class:`~linkrank.ranking.RankTable`."""
    from .ranking import rank_pages

    result = pagerank_vector(M, init, tol, max_iters)
    table = rank_pages(result.scores, M.labels, tie_tol=tie_tol)
    table.trace = result.trace
    return table


@dataclass(frozen=True)
class ProfileRow:
    n: int
    error: float
    decay: float
    ratio: float


def convergence_profile(
    trace: IterationTrace, reference, lambda2_mag: float
) -> list[ProfileRow]:
    """Error ``||I_n - I||_1`` next to ``|lambda2|**n`` for every retained iterate.

    When the error decays like ``c * |lambda2|**n`` the ratio column settles
    to the constant ``c``.
    """
    ref = np.asarray(reference, dtype=float)
    rows = []
    for n, it in zip(trace.steps, trace.iterates):
        err = l1(it, ref)
        decay = lambda2_mag**n
        ratio = err / decay if decay > 0 else math.nan
        rows.append(ProfileRow(n, err, decay, ratio))
    return rows


@dataclass(frozen=True)
class InitSummary:
    init: InitialVector
    verdict: Verdict

    @property
    def steps(self) -> int:
        return self.verdict.step

    @property
    def converged(self) -> bool:
        return self.verdict.kind is VerdictKind.CONVERGED


def compare_inits(
    M: ColumnStochasticMatrix,
    inits,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> list[InitSummary]:
    out = []
    for init in inits:
        trace = power_iterate(M, init, tol, max_iters, retain="none")
        out.append(InitSummary(trace.init, trace.verdict))
    return out
