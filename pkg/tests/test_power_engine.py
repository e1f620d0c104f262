from fractions import Fraction as F

import numpy as np
import pytest

from linkrank.errors import DimensionError, LinkRankError, NonConvergenceError
from linkrank.graph_ingest import parse_edge_list
from linkrank.power_engine import (
    InitialVector,
    VerdictKind,
    compare_inits,
    convergence_profile,
    detect_period2,
    pagerank,
    pagerank_vector,
    power_iterate,
)
from linkrank.spectral_tools import estimate_lambda2_ratio
from linkrank.stochastic_matrix import build_matrix, matvec

from conftest import EIGHT_PAGE_RANK, random_corpus

RANK = np.array([float(x) for x in EIGHT_PAGE_RANK])
DISPLAYED_I55 = [0.0600, 0.0675, 0.0300, 0.0675, 0.0975, 0.2025, 0.1800, 0.2950]


def dense_power_steps(M, x0, tol, max_iters=10000):
    """Independent oracle: plain dense loop, returns the converging step or None."""
    A = M.to_dense()
    x = np.asarray(x0, dtype=float)
    for n in range(1, max_iters + 1):
        y = A @ x
        if np.abs(y - x).sum() <= tol:
            return n
        x = y
    return None


def test_eight_pages_from_e1(eight):
    trace = power_iterate(eight, "e1", tol=1e-6)
    assert trace.verdict.kind is VerdictKind.CONVERGED
    assert np.round(trace.iterate(55), 4).tolist() == DISPLAYED_I55
    assert trace.residuals[trace.verdict.step - 1] <= 1e-6
    assert len(trace.residuals) == trace.verdict.step


def test_four_pages_from_e1_oscillates(four):
    trace = power_iterate(four, "e1", tol=1e-10)
    assert trace.verdict.kind is VerdictKind.OSCILLATING
    for n, it in zip(trace.steps, trace.iterates):
        zeros = [1, 3] if n % 2 == 0 else [0, 2]
        assert np.all(it[zeros] == 0)
        if n >= 2:
            assert np.all(np.delete(it, zeros) > 0)


def test_four_pages_uniform_converges(four):
    trace = power_iterate(four, "uniform", tol=1e-10)
    assert trace.converged
    assert np.round(trace.iterate(10), 4).tolist() == [0.1667, 0.3333, 0.3333, 0.1667]


def _exact_iterates(M, count):
    x = [F(1)] + [F(0)] * (M.n - 1)
    out = [x]
    for _ in range(count):
        x = matvec(M, x)
        out.append(x)
    return out


def test_period2_detection_step_matches_exact_recursion(four):
    # oracle: the same condition evaluated on exact rational iterates
    tol = 1e-6
    its = _exact_iterates(four, 60)
    first = None
    for n in range(2, 61):
        step = sum(abs(a - b) for a, b in zip(its[n], its[n - 1]))
        two = sum(abs(a - b) for a, b in zip(its[n], its[n - 2]))
        if step > tol and two <= tol * min(1, step):
            first = n
            break
    assert first == 22
    trace = power_iterate(four, "e1", tol=tol)
    assert trace.verdict.kind is VerdictKind.OSCILLATING
    assert trace.verdict.step == first


def test_period2_never_fires_on_eight_pages(eight):
    trace = power_iterate(eight, "e1", tol=1e-12)
    assert trace.converged
    its = trace.iterates
    for tol in (1e-6, 1e-10, 1e-12):
        assert not any(detect_period2(its[k - 2:k + 1], tol) for k in range(2, len(its)))


def test_period2_false_on_constant_sequence():
    v = np.full(3, 1 / 3)
    assert not detect_period2([v, v, v], 1e-10)


def test_period2_needs_three_iterates():
    with pytest.raises(ValueError):
        detect_period2([np.ones(2)] * 2, 1e-10)


def test_pagerank_golden(eight, four):
    table = pagerank(eight)
    assert np.all(np.abs(np.array(table.scores) - RANK) <= 1e-8)
    table = pagerank(four)
    assert np.allclose(table.scores, [1 / 6, 1 / 3, 1 / 3, 1 / 6], rtol=0, atol=1e-8)


def test_pagerank_two_cycle_is_immediate(two):
    table = pagerank(two)
    assert table.scores == [0.5, 0.5]
    assert table.trace.verdict.step == 1


def test_pagerank_failure_carries_trace(four):
    with pytest.raises(NonConvergenceError) as info:
        pagerank(four, init="e1")
    assert info.value.trace.verdict.kind is VerdictKind.OSCILLATING


def test_fixed_point_certificate(eight):
    for tol in (1e-6, 1e-10):
        res = pagerank_vector(eight, tol=tol)
        assert res.fixed_point_residual <= 10 * tol


def test_profile_decay_column(eight):
    trace = power_iterate(eight, "e1", tol=1e-10)
    rows = {r.n: r for r in convergence_profile(trace, RANK, 0.87)}
    assert round(rows[40].decay, 4) == 0.0038
    assert round(rows[45].decay, 4) == 0.0019
    assert round(rows[50].decay, 4) == 0.0009
    assert round(rows[55].decay, 4) == 0.0005


def test_profile_initial_error(four):
    trace = power_iterate(four, "uniform", tol=1e-10)
    ref = [1 / 6, 1 / 3, 1 / 3, 1 / 6]
    row0 = convergence_profile(trace, ref, 0.5)[0]
    # |1/4-1/6| + |1/4-1/3| + |1/4-1/3| + |1/4-1/6| = 4/12
    assert row0.n == 0
    assert row0.error == pytest.approx(1 / 3, abs=1e-15)


def test_profile_zero_error_at_fixed_point(two):
    trace = power_iterate(two, "uniform")
    rows = convergence_profile(trace, [0.5, 0.5], 0.9)
    assert [r.error for r in rows] == [0.0, 0.0]


def test_profile_ratio_settles(eight):
    # error_n / |lambda2|^n tends to a constant once lambda3 terms die out
    trace = power_iterate(eight, "e1", tol=1e-12)
    rows = convergence_profile(trace, RANK, 0.8702110332201511)
    tail = [r.ratio for r in rows if 40 <= r.n <= 120]
    assert max(tail) - min(tail) < 1e-3 * max(tail)


def test_compare_inits_counter_example(four):
    rows = compare_inits(four, [InitialVector.e1(), InitialVector.uniform()], tol=1e-3)
    assert rows[0].verdict.kind is VerdictKind.OSCILLATING
    assert rows[1].converged and rows[1].steps <= 10


def test_compare_inits_eight_pages(eight):
    rows = compare_inits(eight, ["e1", "uniform"], tol=1e-10)
    assert all(r.converged for r in rows)
    e1 = np.zeros(8)
    e1[0] = 1
    oracle = [dense_power_steps(eight, e1, 1e-10), dense_power_steps(eight, np.full(8, 1 / 8), 1e-10)]
    assert [r.steps for r in rows] == oracle == [164, 138]


def test_compare_inits_exhausted(eight):
    (row,) = compare_inits(eight, ["e1"], tol=1e-10, max_iters=1)
    assert row.verdict.kind is VerdictKind.EXHAUSTED and row.steps == 1


def test_custom_init(four):
    # orthogonal to the left eigenvector (1, -1, 1, -1) of eigenvalue -1
    trace = power_iterate(four, InitialVector.custom([0.1, 0.2, 0.4, 0.3]))
    assert trace.converged
    trace = power_iterate(four, InitialVector.custom([0.1, 0.2, 0.3, 0.4]))
    assert trace.verdict.kind is VerdictKind.OSCILLATING
    with pytest.raises(DimensionError):
        power_iterate(four, InitialVector.custom([0.5, 0.5]))
    with pytest.raises(LinkRankError):
        power_iterate(four, InitialVector.custom([0.5, 0.5, 0.5, 0.5]))


def test_bad_arguments(four):
    with pytest.raises(ValueError):
        power_iterate(four, tol=0)
    with pytest.raises(ValueError):
        power_iterate(four, max_iters=0)
    with pytest.raises(ValueError):
        InitialVector("random")


def test_retention_modes(eight):
    t = power_iterate(eight, "e1", tol=1e-10, stride=10)
    assert t.steps[:3] == [0, 10, 20] and t.steps[-1] == t.n_steps
    t = power_iterate(eight, "e1", tol=1e-10, retain="none")
    assert t.iterates == [] and len(t.residuals) == 164


def test_large_graph_keeps_residuals_only():
    n = 300
    text = "".join(f"{i} {(i + 1) % n}\n{i} {(i + 2) % n}\n" for i in range(n))
    M = build_matrix(parse_edge_list(text))
    t = power_iterate(M, "uniform")
    assert t.converged and t.iterates == [] and t.n_steps == 1


def test_trace_tsv(four):
    t = power_iterate(four, "uniform", tol=1e-3)
    lines = t.to_tsv().splitlines()
    assert lines[0] == "n\tresidual"
    assert lines[1] == "0\t"
    assert lines[2] == "1\t0.5"
    assert len(lines) == t.n_steps + 2
    wide = t.to_tsv(include_iterates=True, labels=["1", "2", "3", "4"]).splitlines()
    assert wide[0].split("\t") == ["n", "residual", "page_1", "page_2", "page_3", "page_4"]
    assert wide[1].split("\t")[2:] == ["0.25"] * 4


CORPUS = random_corpus(count=60, seed=7)


@pytest.mark.parametrize("idx", range(len(CORPUS)))
def test_trace_invariants_on_random_graphs(idx):
    M = build_matrix(CORPUS[idx])
    for init in ("e1", "uniform"):
        t = power_iterate(M, init, tol=1e-10)
        assert t.verdict.kind in set(VerdictKind)
        assert len(t.residuals) == t.verdict.step
        for it in t.iterates:
            assert abs(it.sum() - 1) <= 1e-12
            assert np.all(it >= 0)
        if t.converged:
            assert np.abs(matvec(M, t.final) - t.final).sum() <= 10 * t.tol


def _spectrum_magnitudes(M):
    return sorted(np.abs(np.linalg.eigvals(M.to_dense())), reverse=True)


def test_residual_ratio_tracks_lambda2_on_random_realistic_graphs():
    checked = 0
    for g in random_corpus(count=200, seed=11):
        M = build_matrix(g)
        mags = _spectrum_magnitudes(M)
        lam2 = mags[1]
        distinct = [m for m in mags[2:] if m < lam2 - 1e-6]
        lam3 = distinct[0] if distinct else 0.0
        # small |lambda2| converges in a few dozen steps, too short a tail to measure
        if not (0.55 <= lam2 <= 0.97 and lam3 <= 0.85 * lam2):
            continue
        t = power_iterate(M, "e1", tol=1e-12)
        assert t.converged
        est = estimate_lambda2_ratio(t)
        assert abs(est.value - lam2) <= 0.05
        checked += 1
    assert checked >= 10
