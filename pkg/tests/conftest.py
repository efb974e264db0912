import numpy as np
import pytest

from core2vec.graph import Graph

# filled by test_acceptance.py, printed at the end of the session
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)


def make_graph(edges, n=None, labels=None):
    edges = list(edges)
    if n is None:
        n = 1 + max(max(u, v) for u, v in edges)
    if not edges:
        return Graph.from_edges(n, [], [], labels=labels)
    u, v = zip(*edges)
    return Graph.from_edges(n, u, v, labels=labels)


def random_graph(rng, n, p):
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, iu[keep], iv[keep])


@pytest.fixture
def triangle():
    return make_graph([(0, 1), (1, 2), (2, 0)], labels=["a", "b", "c"])


@pytest.fixture
def pendant_triangle():
    # triangle a, b, c plus pendant edge c - d
    return make_graph([(0, 1), (1, 2), (2, 0), (2, 3)], labels=["a", "b", "c", "d"])


@pytest.fixture
def path3():
    return make_graph([(0, 1), (1, 2)], labels=["a", "b", "c"])


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
