import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from starfactor.graph import BipartiteView, Graph

# filled by test_acceptance.announce, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda x: int(x.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(k: int) -> Graph:
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def random_bipartite(rnd: random.Random, n_left: int, n_right: int, left_deg: int, right_cap: int | None = None):
    """Left vertices 0..n_left-1, right n_left..; each left vertex picks ``left_deg``
    right neighbors, optionally skipping right vertices already at ``right_cap``."""
    right = list(range(n_left, n_left + n_right))
    load = {w: 0 for w in right}
    edges = []
    for u in range(n_left):
        pool = [w for w in right if right_cap is None or load[w] < right_cap]
        if len(pool) < left_deg:
            return None
        for w in rnd.sample(pool, left_deg):
            edges.append((u, w))
            load[w] += 1
    g = Graph(n_left + n_right, edges)
    return BipartiteView(g, range(n_left), right)


@st.composite
def graphs(draw, min_n=0, max_n=12, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if p is None:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        rnd = random.Random(draw(st.integers(0, 2**32 - 1)))
        mask = [rnd.random() < p for _ in pairs]
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def c4():
    return cycle(4)


@pytest.fixture
def triangle():
    return complete(3)
