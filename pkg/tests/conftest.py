from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from linkrank.graph_ingest import parse_edge_list, read_edge_list
from linkrank.stochastic_matrix import build_matrix

settings.register_profile("default", deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# The eight-page matrix written out entry by entry, rows top to bottom.
EIGHT_PAGE_DENSE = [
    [0, 0, 0, 0, 0, 0, F(1, 3), 0],
    [F(1, 2), 0, F(1, 2), F(1, 3), 0, 0, 0, 0],
    [F(1, 2), 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, F(1, 2), F(1, 3), 0, 0, F(1, 3), 0],
    [0, 0, 0, F(1, 3), F(1, 3), 0, 0, F(1, 2)],
    [0, 0, 0, 0, F(1, 3), 0, 0, F(1, 2)],
    [0, 0, 0, 0, F(1, 3), 1, F(1, 3), 0],
]
FOUR_PAGE_DENSE = [
    [0, F(1, 2), 0, 0],
    [1, 0, F(1, 2), 0],
    [0, F(1, 2), 0, 1],
    [0, 0, F(1, 2), 0],
]
EIGHT_PAGE_RANK = [F(x, 400) for x in (24, 27, 12, 27, 39, 81, 72, 118)]


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def eight_graph():
    return read_edge_list(FIXTURES / "eight_pages.edges")


@pytest.fixture(scope="session")
def four_graph():
    return read_edge_list(FIXTURES / "four_cycle.edges")


@pytest.fixture(scope="session")
def eight(eight_graph):
    return build_matrix(eight_graph)


@pytest.fixture(scope="session")
def four(four_graph):
    return build_matrix(four_graph)


@pytest.fixture(scope="session")
def two():
    return build_matrix(parse_edge_list("1 2\n2 1\n"))


def random_edge_text(rng: np.random.Generator, n: int) -> str:
    """Edge list for a random graph on pages 1..n, every page with out-degree >= 1."""
    lines = []
    for s in range(n):
        others = [t for t in range(n) if t != s]
        k = int(rng.integers(1, n))
        for t in sorted(rng.choice(others, size=k, replace=False)):
            lines.append(f"{s + 1} {t + 1}")
    return "\n".join(lines) + "\n"


def random_corpus(count=200, max_n=10, seed=20240611):
    rng = np.random.default_rng(seed)
    return [parse_edge_list(random_edge_text(rng, int(rng.integers(2, max_n + 1))))
            for _ in range(count)]


@st.composite
def link_graph_texts(draw, min_n=2, max_n=10):
    n = draw(st.integers(min_n, max_n))
    lines = []
    for s in range(n):
        others = [t for t in range(n) if t != s]
        targets = draw(st.lists(st.sampled_from(others), min_size=1, unique=True))
        lines += [f"p{s} p{t}" for t in targets]
    order = draw(st.permutations(lines))
    return "\n".join(order) + "\n"


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
