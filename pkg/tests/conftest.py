import numpy as np
import pytest
from hypothesis import strategies as st

from comdet import datasets
from comdet.graph import Graph
from comdet.modularity import Partition

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}. {title}: {detail}")


@pytest.fixture(scope="session")
def karate():
    return datasets.load_karate()


@pytest.fixture(scope="session")
def southern_women():
    return datasets.load_southern_women()


@pytest.fixture(scope="session")
def dolphins():
    if datasets.dolphins_path() is None:
        pytest.skip(f"dolphins network not available (set {datasets.DOLPHINS_ENV})")
    return datasets.load_dolphins()


def random_instance(rng, max_n=30, p=0.2, min_n=2):
    """Random G(n, p) with at least one edge and a random partition."""
    while True:
        n = int(rng.integers(min_n, max_n + 1))
        iu, ju = np.triu_indices(n, 1)
        keep = rng.random(iu.size) < p
        edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
        if edges:
            break
    g = Graph.from_edges(edges, n=n)
    k = int(rng.integers(1, n + 1))
    return g, Partition(g, rng.integers(0, k, size=n).tolist())


@st.composite
def graphs(draw, min_n=2, max_n=12, min_edges=1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), min_size=min_edges, unique=True)) if pairs else []
    return Graph.from_edges(edges, n=n)


@st.composite
def graph_and_partition(draw, **kw):
    g = draw(graphs(**kw))
    k = draw(st.integers(1, g.n))
    labels = draw(st.lists(st.integers(0, k - 1), min_size=g.n, max_size=g.n))
    return g, Partition(g, labels)
