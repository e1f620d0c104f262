"""Sparse column-stochastic link matrix with exact and float views."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionError, GraphValidationError, LinkRankError
from .graph_ingest import LinkGraph, validate


class ColumnStochasticMatrix:
    """Column-major sparse matrix ``H`` with ``H[i, j] = 1/outdeg(j)`` for each link j -> i.

    Exact weights live in :attr:`columns` as ``(row, Fraction)`` pairs sorted
    by row. The float view is a CSC triple ``(indptr, indices, data)``
    derived from them. Instances are treated as immutable.
    """

    def __init__(self, columns: Sequence[Sequence[tuple[int, Fraction]]], labels=None):
        self.n = len(columns)
        self.columns = tuple(tuple(sorted(col)) for col in columns)
        self.labels = tuple(labels) if labels is not None else tuple(
            str(i + 1) for i in range(self.n)
        )
        if len(self.labels) != self.n:
            raise DimensionError(f"{len(self.labels)} labels for a {self.n}x{self.n} matrix")

        for j, col in enumerate(self.columns):
            for i, w in col:
                if i == j:
                    raise GraphValidationError(f"diagonal entry at page {self.labels[j]!r}")
                if not 0 < w <= 1:
                    raise LinkRankError(f"weight {w} out of (0, 1] at ({i}, {j})")
            if col and sum(w for _, w in col) != 1:
                raise LinkRankError(f"column {j} does not sum to 1")

        indptr = [0]
        for col in self.columns:
            indptr.append(indptr[-1] + len(col))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray([i for col in self.columns for i, _ in col], dtype=np.int64)
        self.data = np.asarray([float(w) for col in self.columns for _, w in col])
        # column index of each stored entry, used to gather v[j] in matvec
        self._entry_cols = np.repeat(np.arange(self.n), np.diff(self.indptr))
        for arr in (self.indptr, self.indices, self.data, self._entry_cols):
            arr.setflags(write=False)

    def __repr__(self):
        return f"ColumnStochasticMatrix(n={self.n}, nnz={self.nnz})"

    @property
    def nnz(self) -> int:
        return len(self.data)

    def entry(self, i: int, j: int) -> Fraction:
        for r, w in self.columns[j]:
            if r == i:
                return w
        return Fraction(0)

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        A[self.indices, self._entry_cols] = self.data
        return A

    def to_fraction_rows(self) -> list[list[Fraction]]:
        """Dense exact matrix as a list of rows."""
        rows = [[Fraction(0)] * self.n for _ in range(self.n)]
        for j, col in enumerate(self.columns):
            for i, w in col:
                rows[i][j] = w
        return rows

    def column_sums(self) -> list[Fraction]:
        return [sum((w for _, w in col), Fraction(0)) for col in self.columns]


def build_matrix(graph: LinkGraph) -> ColumnStochasticMatrix:
    """Google matrix of ``graph``; raises if any page has no out-links."""
    report = validate(graph)
    if report.dangling:
        raise GraphValidationError(
            "dangling page(s) without out-links: " + ", ".join(report.dangling)
        )
    columns = []
    for j in range(graph.n):
        targets = graph.out_links(j)
        w = Fraction(1, len(targets))
        columns.append([(i, w) for i in targets])
    return ColumnStochasticMatrix(columns, labels=graph.labels)


def _check_dim(M, v):
    if len(v) != M.n:
        raise DimensionError(f"vector of length {len(v)} for a {M.n}x{M.n} matrix")


def _is_exact(v) -> bool:
    return not isinstance(v, np.ndarray) and all(isinstance(x, (int, Fraction)) for x in v)


def matvec(M: ColumnStochasticMatrix, v):
    """Return ``H @ v``.

    Float input uses the cached float weights; a sequence of ints/Fractions
    is multiplied exactly and returns a list of Fractions. Accumulation runs
    in ascending column order, so float results are bit-reproducible.
    """
    _check_dim(M, v)
    if _is_exact(v):
        out = [Fraction(0)] * M.n
        for j, col in enumerate(M.columns):
            vj = v[j]
            if vj:
                for i, w in col:
                    out[i] += w * vj
        return out
    v = np.asarray(v, dtype=float)
    contrib = M.data * v[M._entry_cols]
    return np.bincount(M.indices, weights=contrib, minlength=M.n)


def transpose_matvec(M: ColumnStochasticMatrix, v):
    """Return ``H.T @ v`` (exact for Fraction input, as in :func:`matvec`)."""
    _check_dim(M, v)
    if _is_exact(v):
        return [sum((w * v[i] for i, w in col), Fraction(0)) for col in M.columns]
    v = np.asarray(v, dtype=float)
    contrib = M.data * v[M.indices]
    return np.bincount(M._entry_cols, weights=contrib, minlength=M.n)


def stationary_vector_exact(M: ColumnStochasticMatrix) -> list[Fraction]:
    """Exact stochastic solution of ``H x = x`` by rational Gaussian elimination.

    Raises ``LinkRankError`` when the fixed-point space is not one-dimensional.
    """
    n = M.n
    rows = M.to_fraction_rows()
    for i in range(n):
        rows[i][i] -= 1
    # replace the system's redundancy with the normalisation sum(x) = 1
    aug = [row + [Fraction(0)] for row in rows] + [[Fraction(1)] * n + [Fraction(1)]]

    pivots = []
    r = 0
    for c in range(n):
        p = next((k for k in range(r, len(aug)) if aug[k][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for k in range(len(aug)):
            if k != r and aug[k][c] != 0:
                f = aug[k][c]
                aug[k] = [a - f * b for a, b in zip(aug[k], aug[r])]
        pivots.append(c)
        r += 1
    if len(pivots) != n:
        raise LinkRankError(
            "eigenvalue 1 is not simple: the fixed-point space has dimension "
            f"{n - len(pivots) + 1}"
        )
    if any(row[-1] != 0 for row in aug[n:]):
        raise LinkRankError("inconsistent fixed-point system")
    return [aug[k][-1] for k in range(n)]


def matrix_to_tsv(M: ColumnStochasticMatrix) -> str:
    """Debug dump: ``row, col, numerator, denominator`` sorted by (col, row), 0-based."""
    lines = ["row\tcol\tnumerator\tdenominator"]
    for j, col in enumerate(M.columns):
        for i, w in col:
            lines.append(f"{i}\t{j}\t{w.numerator}\t{w.denominator}")
    return "\n".join(lines) + "\n"
